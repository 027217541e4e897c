#pragma once

#include "nlap/kernel.hpp"
#include "nlap/specfun.hpp"

#include <string_view>

namespace nlap {

enum class MultiplierMethod { Series, ExactLocal, Asymptotic, Quadrature, LimitBessel };

std::string_view to_string(MultiplierMethod method);

struct MultiplierResult {
    double value = 0.0;
    MultiplierMethod method = MultiplierMethod::Series;
    double est_error = 0.0;
};

/// c^{delta,beta} = 2(n+2-beta) Gamma(n/2+1) / (pi^{n/2} delta^{n+2-beta}), beta < n+2.
double scaling_constant(const KernelParams& params);

/// Fourier multiplier m^{delta,beta}(nu) as a function of |nu|.
///
/// Routes, in order:
///  - beta = n+2: -|nu|^2 exactly;
///  - (|nu| delta/2)^2 <= large_arg_threshold: the 2F3 power series;
///  - |nu| delta/2 <= quadrature_arg_limit (or a series flagged unreliable):
///    a convergent integral of the 1F2 limit kernel, valid for every admissible beta;
///  - beyond that: the leading large-|nu| asymptote, est_error from the first omitted term.
/// The -inf exponent is forwarded to multiplier_limit_beta_neg_inf.
MultiplierResult multiplier(const KernelParams& params, double nu_norm,
                            const EvalPolicy& policy = {});

/// Independent evaluation of the radial Bessel integral for beta < n+2 by
/// adaptive quadrature with the endpoint substitution r = delta t^{2/(n+2-beta)}.
double multiplier_quadrature_oracle(const KernelParams& params, double nu_norm, double tol);

/// m^{delta,-inf}(nu): Bessel form for |nu| delta > 1e-2, 1F2 series below.
MultiplierResult multiplier_limit_beta_neg_inf(int n, double delta, double nu_norm);

/// Leading large-|nu| behaviour (separate beta = n logarithmic branch).
double asymptotic_large_nu(const KernelParams& params, double nu_norm);

/// -|nu|^2 (1 - delta^2 (n+2-beta) / (4(n+2)(n+4-beta)) |nu|^2).
double asymptotic_small_nu(const KernelParams& params, double nu_norm);

/// Large-|nu| form of m^{delta,-inf}: oscillating Bessel envelope minus 2n/delta^2.
double asymptotic_limit_large_nu(int n, double delta, double nu_norm);

namespace detail {

/// G_n(w) = 1F2(1; 2, n/2+1; w) for w <= 0 with the first `skip` Taylor terms removed.
double limit_kernel_tail(int n, double w, int skip);

}  // namespace detail

}  // namespace nlap
