#include "nlap/multipliers.hpp"

#include "nlap/errors.hpp"
#include "nlap/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace nlap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;

void require_nu(double nu_norm, const char* what) {
    if (!std::isfinite(nu_norm) || nu_norm < 0.0) {
        throw DomainError(std::string(what) + ": |nu| must be finite and >= 0");
    }
}

// Below this |w| the 1F2 tail is summed directly; above it the Bessel form is used.
constexpr double kLimitSeriesCutoff = 16.0;

double limit_kernel_series_tail(double b, double w, int skip) {
    // c_k = 1 / ((k+1)! (b)_k)
    double coeff = 1.0;
    for (int k = 0; k < skip; ++k) {
        coeff /= (k + 2.0) * (b + k);
    }
    double term = coeff * std::pow(w, skip);
    double sum = term;
    for (int k = skip; k < 400; ++k) {
        term *= w / ((k + 2.0) * (b + k));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) {
            break;
        }
    }
    return sum;
}

// The 2F3 sum with ratio a/(a+k) folded into an integral of the 1F2 kernel G:
//   F(z) = sum_{k<J} a/(a+k) c_k z^k t0^{a+k} + a int_0^t0 t^{a-1} R_J(t z) dt
//          + a int_t0^1 t^{a-1} G(t z) dt,
// where R_J drops the first J Taylor terms so that a + J >= 1. Splitting at
// t0 = min(1, 1/|z|) keeps the polynomial part from cancelling against the integral.
MultiplierResult multiplier_by_integral(const KernelParams& params, double nu_norm, double z,
                                        const EvalPolicy& policy) {
    const double a = params.series_a();
    const double b = params.series_b();
    const int skip = a >= 1.0 ? 0 : static_cast<int>(std::ceil(1.0 - a));
    const double t0 = std::min(1.0, 1.0 / std::abs(z));

    double head = 0.0;
    double coeff = 1.0;
    double zk = 1.0;
    for (int k = 0; k < skip; ++k) {
        head += a / (a + k) * coeff * zk * std::pow(t0, a + k);
        coeff /= (k + 2.0) * (b + k);
        zk *= z;
    }

    const int n = params.n;
    QuadOptions options;
    options.rel_tol = policy.quadrature_rel_tol;
    options.abs_tol = policy.quadrature_rel_tol * 1e-2 * std::max(std::abs(head), 1e-300);
    options.max_subdivisions = 20000;
    const QuadResult inner = integrate(
        [&](double t) { return std::pow(t, a - 1.0) * detail::limit_kernel_tail(n, t * z, skip); },
        0.0, t0, options);
    QuadResult outer;
    if (t0 < 1.0) {
        outer = integrate(
            [&](double t) { return std::pow(t, a - 1.0) * detail::limit_kernel_tail(n, t * z, 0); },
            t0, 1.0, options);
    }

    const double series = head + a * (inner.value + outer.value);
    const double nu2 = nu_norm * nu_norm;
    MultiplierResult out;
    out.value = -nu2 * series;
    out.method = MultiplierMethod::Quadrature;
    out.est_error =
        nu2 * (std::abs(a) * (inner.est_error + outer.est_error) + 1e-15 * std::abs(head));
    return out;
}

// Magnitude of the leading oscillatory correction omitted by the large-|nu| asymptote.
double asymptotic_error_scale(const KernelParams& params, double nu_norm) {
    const double a = params.series_a();
    const double b = params.series_b();
    const double x = 0.5 * nu_norm * params.delta;
    const double log_scale = std::log(std::abs(a)) + log_abs_gamma(b) + (b + 2.0) * std::log(2.0) -
                             0.5 * std::log(2.0 * kPi) -
                             0.5 * (params.n + 5.0) * std::log(2.0 * x);
    return nu_norm * nu_norm * std::exp(log_scale);
}

}  // namespace

std::string_view to_string(MultiplierMethod method) {
    switch (method) {
        case MultiplierMethod::Series: return "SERIES";
        case MultiplierMethod::ExactLocal: return "EXACT_LOCAL";
        case MultiplierMethod::Asymptotic: return "ASYMPTOTIC";
        case MultiplierMethod::Quadrature: return "QUADRATURE";
        case MultiplierMethod::LimitBessel: return "LIMIT_BESSEL";
    }
    return "UNKNOWN";
}

namespace detail {

double limit_kernel_tail(int n, double w, int skip) {
    const double b = 0.5 * n + 1.0;
    if (-w <= kLimitSeriesCutoff) {
        return limit_kernel_series_tail(b, w, skip);
    }
    // G(-y^2) = -(Gamma(b)/y^2) [J_mu(2y)/y^mu - 1/Gamma(mu+1)], mu = n/2 - 1.
    const double y = std::sqrt(-w);
    const double mu = b - 2.0;
    double full;
    if (n == 1) {
        const double s = std::sin(y);
        full = s * s / (y * y);
    } else {
        const double bracket = bessel_j(mu, 2.0 * y) / std::pow(y, mu) - 1.0 / gamma(mu + 1.0);
        full = -gamma(b) / (y * y) * bracket;
    }
    double coeff = 1.0;
    double wk = 1.0;
    for (int k = 0; k < skip; ++k) {
        full -= coeff * wk;
        coeff /= (k + 2.0) * (b + k);
        wk *= w;
    }
    return full;
}

}  // namespace detail

double scaling_constant(const KernelParams& params) {
    params.validate();
    params.require_integral_form("scaling_constant");
    const int n = params.n;
    const double p = n + 2.0 - params.beta.value();
    return 2.0 * p * gamma(0.5 * n + 1.0) /
           (std::pow(kPi, 0.5 * n) * std::pow(params.delta, p));
}

MultiplierResult multiplier(const KernelParams& params, double nu_norm, const EvalPolicy& policy) {
    params.validate();
    policy.validate();
    require_nu(nu_norm, "multiplier");
    if (params.beta.is_neg_inf()) {
        return multiplier_limit_beta_neg_inf(params.n, params.delta, nu_norm);
    }
    const double nu2 = nu_norm * nu_norm;
    if (params.is_local()) {
        return {-nu2, MultiplierMethod::ExactLocal, 0.0};
    }
    if (nu_norm == 0.0) {
        return {0.0, MultiplierMethod::Series, 0.0};
    }

    const double x = nu_norm * params.delta * 0.5;
    const double z = -(x * x);
    if (x * x <= policy.large_arg_threshold) {
        const double a = params.series_a();
        const std::array<double, 2> num = {1.0, a};
        const std::array<double, 3> den = {2.0, params.series_b(), a + 1.0};
        const SeriesValue sv = hyp_pfq(num, den, z, policy);
        if (sv.reliable) {
            return {-nu2 * sv.value, MultiplierMethod::Series, nu2 * sv.est_error};
        }
    }
    if (x <= policy.quadrature_arg_limit) {
        return multiplier_by_integral(params, nu_norm, z, policy);
    }
    return {asymptotic_large_nu(params, nu_norm), MultiplierMethod::Asymptotic,
            asymptotic_error_scale(params, nu_norm)};
}

double multiplier_quadrature_oracle(const KernelParams& params, double nu_norm, double tol) {
    params.validate();
    params.require_integral_form("multiplier_quadrature_oracle");
    require_nu(nu_norm, "multiplier_quadrature_oracle");
    if (!(tol > 0.0)) {
        throw DomainError("multiplier_quadrature_oracle: tol must be > 0");
    }
    if (nu_norm == 0.0) {
        return 0.0;
    }
    const int n = params.n;
    const double p = n + 2.0 - params.beta.value();
    const double order = 0.5 * n - 1.0;
    const double inv_gamma_half_n = 1.0 / gamma(0.5 * n);
    const double scale = nu_norm * params.delta;

    // Bracket J_mu(s)/(s/2)^mu - 1/Gamma(n/2), divided by s^2.
    auto reduced_bracket = [&](double s) {
        if (s <= 2.0) {
            const double q = -0.25 * s * s;
            double term = -0.25 / gamma(order + 2.0);
            double sum = term;
            for (int k = 1; k < 200; ++k) {
                term *= q / ((k + 1.0) * (order + k + 1.0));
                sum += term;
                if (std::abs(term) <= 1e-18 * std::abs(sum)) {
                    break;
                }
            }
            return sum;
        }
        double bracket;
        if (n == 1) {
            bracket = (std::cos(s) - 1.0) / std::sqrt(kPi);
        } else if (n == 3) {
            bracket = (std::sin(s) / s - 1.0) * inv_gamma_half_n;
        } else {
            bracket = bessel_j(order, s) / std::pow(0.5 * s, order) - inv_gamma_half_n;
        }
        return bracket / (s * s);
    };

    // r = delta t^{2/p}; the r^{n+1-beta} endpoint weight becomes the factor t.
    auto integrand = [&](double t) { return t * reduced_bracket(scale * std::pow(t, 2.0 / p)); };
    const double prefactor = 8.0 * gamma(0.5 * n + 1.0) * nu_norm * nu_norm;

    QuadOptions options;
    options.rel_tol = 1e-2 * tol;
    options.abs_tol = 1e-2 * tol / prefactor;
    options.max_subdivisions = 10000;
    return prefactor * integrate(integrand, 0.0, 1.0, options).value;
}

MultiplierResult multiplier_limit_beta_neg_inf(int n, double delta, double nu_norm) {
    KernelParams(n, delta, KernelExponent::neg_inf()).validate();
    require_nu(nu_norm, "multiplier_limit_beta_neg_inf");
    const double s = nu_norm * delta;
    const double b = 0.5 * n + 1.0;
    MultiplierResult out;
    out.method = MultiplierMethod::LimitBessel;
    if (nu_norm == 0.0) {
        return out;
    }
    if (s > 1e-2) {
        const double order = 0.5 * n - 1.0;
        const double bracket = bessel_j(order, s) / std::pow(0.5 * s, order) - 1.0 / gamma(0.5 * n);
        out.value = 4.0 * gamma(b) / (delta * delta) * bracket;
        out.est_error = 4.0 * gamma(b) / (delta * delta) * 1e-15;
    } else {
        const std::array<double, 1> num = {1.0};
        const std::array<double, 2> den = {2.0, b};
        const SeriesValue sv = hyp_pfq(num, den, -0.25 * s * s);
        out.value = -nu_norm * nu_norm * sv.value;
        out.est_error = nu_norm * nu_norm * sv.est_error;
    }
    return out;
}

double asymptotic_large_nu(const KernelParams& params, double nu_norm) {
    params.validate();
    if (params.beta.is_neg_inf()) {
        throw DomainError("asymptotic_large_nu: use asymptotic_limit_large_nu for beta = -inf");
    }
    if (params.is_local()) {
        throw DomainError("asymptotic_large_nu: beta = n+2 is exact (m = -|nu|^2)");
    }
    if (!std::isfinite(nu_norm) || !(nu_norm > 0.0)) {
        throw DomainError("asymptotic_large_nu: |nu| must be finite and > 0");
    }
    const int n = params.n;
    const double beta = params.beta.value();
    const double delta2 = params.delta * params.delta;
    if (beta == static_cast<double>(n)) {
        return -(2.0 * n / delta2) * (2.0 * std::log(nu_norm) + std::log(0.25 * delta2) +
                                      kEulerGamma - digamma(0.5 * n));
    }
    const double constant = -2.0 * n * (n + 2.0 - beta) / (delta2 * (n - beta));
    if (reciprocal_gamma(0.5 * beta) == 0.0) {
        return constant;
    }
    // 2 (2/delta)^{n+2-beta} Gamma((n+4-beta)/2) Gamma((n+2)/2) / ((n-beta) Gamma(beta/2)) |nu|^{beta-n}
    int sign_num = 1;
    int sign_den = 1;
    const double log_num = (n + 2.0 - beta) * std::log(2.0 / params.delta) +
                           log_abs_gamma(0.5 * (n + 4.0 - beta), &sign_num) +
                           log_abs_gamma(0.5 * (n + 2.0)) + (beta - n) * std::log(nu_norm);
    const double log_den = std::log(std::abs(n - beta)) + log_abs_gamma(0.5 * beta, &sign_den);
    const double sign = sign_num * sign_den * ((n - beta) < 0.0 ? -1.0 : 1.0);
    return constant + 2.0 * sign * std::exp(log_num - log_den);
}

double asymptotic_small_nu(const KernelParams& params, double nu_norm) {
    params.validate();
    require_nu(nu_norm, "asymptotic_small_nu");
    const int n = params.n;
    const double nu2 = nu_norm * nu_norm;
    const double delta2 = params.delta * params.delta;
    // beta -> -inf: (n+2-beta)/(n+4-beta) -> 1.
    const double ratio = params.beta.is_neg_inf()
                             ? 1.0
                             : (n + 2.0 - params.beta.value()) / (n + 4.0 - params.beta.value());
    return -nu2 * (1.0 - delta2 * ratio / (4.0 * (n + 2.0)) * nu2);
}

double asymptotic_limit_large_nu(int n, double delta, double nu_norm) {
    KernelParams(n, delta, KernelExponent::neg_inf()).validate();
    if (!std::isfinite(nu_norm) || !(nu_norm > 0.0)) {
        throw DomainError("asymptotic_limit_large_nu: |nu| must be finite and > 0");
    }
    const double amplitude = std::pow(2.0 / delta, 0.5 * (n + 3)) * gamma(0.5 * n + 1.0) /
                             std::sqrt(kPi) * std::pow(nu_norm, -0.5 * (n - 1));
    return amplitude * std::cos(nu_norm * delta - 0.25 * (n - 1) * kPi) - 2.0 * n / (delta * delta);
}

}  // namespace nlap
