#pragma once

#include "nlap/kernel.hpp"

#include <Eigen/Dense>

#include <functional>

namespace nlap {

enum class Smoothness { C0, C3 };

/// Caller-supplied field x -> u(x) on R^n, tagged with its declared smoothness.
struct ScalarFieldFn {
    std::function<double(const Eigen::VectorXd&)> eval;
    Smoothness smoothness = Smoothness::C3;

    double operator()(const Eigen::VectorXd& x) const { return eval(x); }
};

/// (c/2) * integral over the ball of radius delta of
/// (u(x+z) + u(x-z) - 2u(x)) / |z|^beta dz, for n in {1, 2, 3}.
/// C3 fields use a second-difference quotient radial integrand; C0 fields
/// need beta < n. Throws DomainError for beta >= n+2, for n > 3 and for a C0
/// field with beta >= n.
double apply_nonlocal_laplacian(const ScalarFieldFn& u, const Eigen::VectorXd& x,
                                const KernelParams& params, double tol);

/// 2 Gamma(n/2+1) / (pi^{n/2} delta^2) times the surface integral of
/// u(x + delta w) - u(x) over the unit sphere, n in {1, 2, 3}.
double apply_limit_operator_sphere(const ScalarFieldFn& u, const Eigen::VectorXd& x, int n,
                                   double delta, double tol);

/// H_x * 2n(2+n-beta)/(3+n-beta) * delta.
double taylor_error_bound(const KernelParams& params, double h_x);

/// Third-derivative modulus for u(x) = sin(x_1).
inline constexpr double kTaylorModulusSinFirstAxis = 1.0 / 3.0;

}  // namespace nlap
