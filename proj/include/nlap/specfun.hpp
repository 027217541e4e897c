#pragma once

#include <span>

namespace nlap {

/// Tolerances and limits shared by the series evaluators and the multiplier dispatch.
struct EvalPolicy {
    double rel_tol = 1e-14;
    double abs_tol = 0.0;
    int max_terms = 5000;
    /// Largest partial term over |sum| tolerated before a sum is flagged unreliable.
    double cancellation_guard = 1e12;
    /// Series argument |z| above which multiplier evaluation leaves the power series.
    double large_arg_threshold = 30.0;
    /// Half-argument ‖ν‖δ/2 above which the integral route gives way to the asymptote.
    double quadrature_arg_limit = 2000.0;
    /// Relative target of the integral route.
    double quadrature_rel_tol = 1e-12;

    /// Throws ParameterError when a field is out of range.
    void validate() const;
};

struct SeriesValue {
    double value = 0.0;
    double est_error = 0.0;
    int terms_used = 0;
    bool reliable = false;
};

double gamma(double x);
/// log|Gamma(x)|; sign (optional) receives the sign of Gamma(x).
double log_abs_gamma(double x, int* sign = nullptr);
/// 1/Gamma(x), zero at the poles.
double reciprocal_gamma(double x);
double digamma(double x);

/// Rising factorial (a)_k.
double pochhammer(double a, int k);

/// Bessel function of the first kind J_order(x), order >= -1/2, x >= 0.
double bessel_j(double order, double x);

/// Generalized hypergeometric series pFq(a; b; z) summed term by term.
///
/// Summation is compensated. The loop stops once two consecutive terms fall
/// below rel_tol*|sum| + abs_tol. The result is marked unreliable when the
/// largest term exceeds cancellation_guard*|sum|, when the rounding estimate
/// exceeds the requested tolerance, or when max_terms is reached (in which
/// case ConvergenceError is thrown instead).
SeriesValue hyp_pfq(std::span<const double> a, std::span<const double> b, double z,
                    const EvalPolicy& policy = {});

}  // namespace nlap
