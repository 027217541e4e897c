#include "nlap/realspace.hpp"

#include "nlap/errors.hpp"
#include "nlap/quadrature.hpp"
#include "nlap/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace nlap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxCircleLevel = 14;
constexpr int kMaxSphereLevel = 9;

void require_supported_dimension(int n, const char* what) {
    if (n < 1 || n > 3) {
        throw DomainError(std::string(what) + ": only n = 1, 2, 3 are supported");
    }
}

void require_point(const Eigen::VectorXd& x, int n, const char* what) {
    if (x.size() != n) {
        throw ShapeError(std::string(what) + ": point dimension does not match n");
    }
}

// Weighted nodes on the unit sphere S^{n-1}; weights sum to its surface area.
struct SphereRule {
    std::vector<Eigen::VectorXd> nodes;
    std::vector<double> weights;
};

SphereRule sphere_rule(int n, int level) {
    SphereRule rule;
    if (n == 1) {
        rule.nodes = {Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, -1.0)};
        rule.weights = {1.0, 1.0};
        return rule;
    }
    const int m = 4 << level;
    if (n == 2) {
        for (int j = 0; j < m; ++j) {
            const double phi = 2.0 * kPi * (j + 0.5) / m;
            Eigen::VectorXd w(2);
            w << std::cos(phi), std::sin(phi);
            rule.nodes.push_back(w);
            rule.weights.push_back(2.0 * kPi / m);
        }
        return rule;
    }
    const GaussRule gl = gauss_legendre(m / 2);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double ct = gl.nodes[i];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (int j = 0; j < m; ++j) {
            const double phi = 2.0 * kPi * (j + 0.5) / m;
            Eigen::VectorXd w(3);
            w << st * std::cos(phi), st * std::sin(phi), ct;
            rule.nodes.push_back(w);
            rule.weights.push_back(gl.weights[i] * 2.0 * kPi / m);
        }
    }
    return rule;
}

double sphere_sum(const SphereRule& rule, const std::function<double(const Eigen::VectorXd&)>& g) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * g(rule.nodes[i]);
    }
    return sum;
}

// Refines the angular rule at the outermost radius until two levels agree.
SphereRule converged_sphere_rule(int n, const std::function<double(const Eigen::VectorXd&)>& g,
                                 double tol) {
    SphereRule rule = sphere_rule(n, 0);
    if (n == 1) {
        return rule;
    }
    double previous = sphere_sum(rule, g);
    const int max_level = n == 2 ? kMaxCircleLevel : kMaxSphereLevel;
    for (int level = 1; level <= max_level; ++level) {
        SphereRule finer = sphere_rule(n, level);
        const double current = sphere_sum(finer, g);
        if (std::abs(current - previous) <= tol * std::max(1.0, std::abs(current))) {
            return finer;
        }
        previous = current;
        rule = std::move(finer);
    }
    throw ConvergenceError("sphere quadrature did not converge");
}

double angular_constant(int n) { return 2.0 * gamma(0.5 * n + 1.0) / std::pow(kPi, 0.5 * n); }

}  // namespace

double apply_nonlocal_laplacian(const ScalarFieldFn& u, const Eigen::VectorXd& x,
                                const KernelParams& params, double tol) {
    params.validate();
    params.require_integral_form("apply_nonlocal_laplacian");
    require_supported_dimension(params.n, "apply_nonlocal_laplacian");
    require_point(x, params.n, "apply_nonlocal_laplacian");
    if (!(tol > 0.0)) {
        throw DomainError("apply_nonlocal_laplacian: tol must be > 0");
    }
    const int n = params.n;
    const double beta = params.beta.value();
    const double delta = params.delta;
    if (u.smoothness == Smoothness::C0 && beta >= n) {
        throw DomainError("apply_nonlocal_laplacian: a C0 field requires beta < n");
    }

    const double u0 = u(x);
    auto second_difference = [&](double r, const Eigen::VectorXd& w) {
        return u(x + r * w) + u(x - r * w) - 2.0 * u0;
    };
    const SphereRule rule = converged_sphere_rule(
        n, [&](const Eigen::VectorXd& w) { return second_difference(delta, w); }, 0.1 * tol);
    auto shell = [&](double r) {
        return sphere_sum(rule, [&](const Eigen::VectorXd& w) { return second_difference(r, w); });
    };

    QuadOptions options;
    options.rel_tol = 0.1 * tol;
    options.abs_tol = 0.1 * tol;
    options.max_subdivisions = 20000;

    if (u.smoothness == Smoothness::C3) {
        // r = delta t^{2/p}: the shell integral over r^2 integrates against t dt.
        // Below r_floor the quotient is replaced by its quadratic-in-r^2 interpolant
        // through r_floor, 2 r_floor and 4 r_floor.
        const double p = n + 2.0 - beta;
        const double r_floor = 1e-2 * std::min(delta, 1.0);
        std::array<double, 3> s_node{};
        std::array<double, 3> q_node{};
        for (int i = 0; i < 3; ++i) {
            const double r = r_floor * (1 << i);
            s_node[i] = r * r;
            q_node[i] = shell(r) / s_node[i];
        }
        auto quotient_model = [&](double s2) {
            double sum = 0.0;
            for (int i = 0; i < 3; ++i) {
                double weight = 1.0;
                for (int j = 0; j < 3; ++j) {
                    if (j != i) {
                        weight *= (s2 - s_node[j]) / (s_node[i] - s_node[j]);
                    }
                }
                sum += weight * q_node[i];
            }
            return sum;
        };
        auto integrand = [&](double t) {
            const double r = delta * std::pow(t, 2.0 / p);
            if (r < r_floor) {
                return t * quotient_model(r * r);
            }
            return t * shell(r) / (r * r);
        };
        const double constant = angular_constant(n);
        options.abs_tol /= constant;
        return constant * integrate(integrand, 0.0, 1.0, options).value;
    }

    // r = delta s^{1/(n-beta)}: the radial weight becomes constant.
    const double q = n - beta;
    auto integrand = [&](double s) { return shell(delta * std::pow(s, 1.0 / q)); };
    const double constant = 0.5 * (n + 2.0 - beta) * angular_constant(n) / (q * delta * delta);
    options.abs_tol /= constant;
    return constant * integrate(integrand, 0.0, 1.0, options).value;
}

double apply_limit_operator_sphere(const ScalarFieldFn& u, const Eigen::VectorXd& x, int n,
                                   double delta, double tol) {
    require_supported_dimension(n, "apply_limit_operator_sphere");
    require_point(x, n, "apply_limit_operator_sphere");
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw DomainError("apply_limit_operator_sphere: delta must be finite and > 0");
    }
    if (!(tol > 0.0)) {
        throw DomainError("apply_limit_operator_sphere: tol must be > 0");
    }
    const double u0 = u(x);
    auto difference = [&](const Eigen::VectorXd& w) { return u(x + delta * w) - u0; };
    const SphereRule rule = converged_sphere_rule(n, difference, 0.1 * tol);
    return angular_constant(n) / (delta * delta) * sphere_sum(rule, difference);
}

double taylor_error_bound(const KernelParams& params, double h_x) {
    params.validate();
    params.require_integral_form("taylor_error_bound");
    if (!(h_x >= 0.0)) {
        throw DomainError("taylor_error_bound: H_x must be >= 0");
    }
    const double n = params.n;
    const double beta = params.beta.value();
    return h_x * 2.0 * n * (2.0 + n - beta) / (3.0 + n - beta) * params.delta;
}

}  // namespace nlap
