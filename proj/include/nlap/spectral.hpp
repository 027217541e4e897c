#pragma once

#include "nlap/kernel.hpp"
#include "nlap/specfun.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace nlap {

/// Periodic box prod_i [0, l_i) sampled on N_i points per axis.
struct TorusSpec {
    int n = 1;
    std::vector<double> lengths;
    std::vector<int> grid_sizes;

    /// Torus with equal length and grid size on every axis.
    static TorusSpec cube(int n, double length, int grid_size);

    void validate() const;
    Eigen::Index size() const;

    friend bool operator==(const TorusSpec&, const TorusSpec&) = default;
};

/// Samples at x_j = (j_i l_i / N_i), flattened with axis 0 varying slowest.
struct GridField {
    TorusSpec torus;
    Eigen::ArrayXd samples;
};

/// Coefficients u_k of u(x) = sum_k u_k exp(i nu_k . x), each axis stored over
/// k_i = -floor(N_i/2), ..., ceil(N_i/2)-1 and flattened like GridField.
struct SpectralField {
    TorusSpec torus;
    Eigen::ArrayXcd coeffs;
};

/// Integer wave indices k, one column per stored coefficient.
Eigen::MatrixXi wave_indices(const TorusSpec& torus);

/// nu_k = (2 pi k_1 / l_1, ..., 2 pi k_n / l_n), one column per stored coefficient.
Eigen::MatrixXd frequencies(const TorusSpec& torus);

/// Grid points x_j, one column per sample.
Eigen::MatrixXd grid_points(const TorusSpec& torus);

GridField sample_grid(const TorusSpec& torus,
                      const std::function<double(const Eigen::VectorXd&)>& u);

/// Multipliers m(|nu_k|) aligned with SpectralField::coeffs; entry k = 0 is 0.
/// Each distinct radius is evaluated once, spread over NLAP_THREADS threads
/// (default: hardware concurrency).
Eigen::ArrayXd eigenvalue_array(const TorusSpec& torus, const KernelParams& params,
                                const EvalPolicy& policy = {});

SpectralField forward_transform(const GridField& g);
GridField inverse_transform(const SpectralField& g_hat);

SpectralField apply_operator_spectral(const SpectralField& u, const KernelParams& params,
                                      const EvalPolicy& policy = {});
/// Same, with a precomputed eigenvalue array.
SpectralField apply_operator_spectral(const SpectralField& u, const Eigen::ArrayXd& eigenvalues);

/// u_k = f_k / m(nu_k) for k != 0 and u_0 = 0. Throws CompatibilityError when
/// |f_0| > 1e-12 max_k |f_k| and SingularEigenvalueError when |m(nu_k)| < 1e-300.
SpectralField solve_poisson(const SpectralField& f, const KernelParams& params,
                            const EvalPolicy& policy = {});
SpectralField solve_poisson(const SpectralField& f, const Eigen::ArrayXd& eigenvalues);

/// (sum_k (1 + |k|^2)^s |u_k|^2)^{1/2} with integer indices k.
double sobolev_norm(const SpectralField& u, double s);

}  // namespace nlap
