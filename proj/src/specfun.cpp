#include "nlap/specfun.hpp"

#include "nlap/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace nlap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// sin(pi*x) with exact reduction of the argument.
double sin_pi(double x) {
    double r = std::remainder(x, 2.0);
    if (r > 0.5) {
        r = 1.0 - r;
    } else if (r < -0.5) {
        r = -1.0 - r;
    }
    return std::sin(kPi * r);
}

double cos_pi(double x) {
    double r = std::abs(std::remainder(x, 2.0));  // [0, 1]
    if (r > 0.5) {
        return -std::sin(kPi * (r - 0.5));
    }
    return std::sin(kPi * (0.5 - r));
}

// Lanczos approximation, g = 7, 9 coefficients.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double gamma_lanczos(double x) {
    const double xm1 = x - 1.0;
    double series = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) {
        series += kLanczos[i] / (xm1 + static_cast<double>(i));
    }
    const double t = xm1 + kLanczosG + 0.5;
    // t^(x-1/2) is split in two so that large x does not overflow before exp(-t) is applied.
    const double half_power = std::pow(t, 0.5 * (xm1 + 0.5));
    return std::sqrt(2.0 * kPi) * half_power * (half_power * std::exp(-t)) * series;
}

// -- Bessel J helpers --------------------------------------------------------

double bessel_series(double order, double x) {
    const double quarter_x2 = -0.25 * x * x;
    double term = std::pow(0.5 * x, order) / gamma(order + 1.0);
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= quarter_x2 / (static_cast<double>(k) * (order + k));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) {
            break;
        }
    }
    return sum;
}

// Hankel large-argument expansion. Returns false when the asymptotic series
// does not reach double precision before its terms start to grow.
bool bessel_hankel(double order, double x, double& out) {
    const double mu4 = 4.0 * order * order;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double prev_abs = 1.0;
    bool converged = false;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu4 - odd * odd) / (static_cast<double>(k) * 8.0 * x);
        const double abs_term = std::abs(term);
        if (abs_term == 0.0) {
            converged = true;
            break;
        }
        if (abs_term > prev_abs) {
            break;
        }
        // Signs: P = a0 - a2 + a4 - ..., Q = a1 - a3 + ...
        switch (k % 4) {
            case 0: p += term; break;
            case 1: q += term; break;
            case 2: p -= term; break;
            case 3: q -= term; break;
        }
        if (abs_term < 1e-17) {
            converged = true;
            break;
        }
        prev_abs = abs_term;
    }
    if (!converged) {
        return false;
    }
    const double phase = 0.5 * order + 0.25;
    const double cphi = cos_pi(phase);
    const double sphi = sin_pi(phase);
    const double cx = std::cos(x);
    const double sx = std::sin(x);
    const double cos_chi = cx * cphi + sx * sphi;
    const double sin_chi = sx * cphi - cx * sphi;
    out = std::sqrt(2.0 / (kPi * x)) * (p * cos_chi - q * sin_chi);
    return true;
}

// Miller backward recurrence normalised with
// (x/2)^v / Gamma(v+1) = J_v + sum_{i>=1} (v+2i) (v+1)_{i-1}/i! J_{v+2i}.
double bessel_miller(double order, double x) {
    const int start = static_cast<int>(std::ceil(x)) + 60 +
                      static_cast<int>(std::ceil(2.0 * std::cbrt(x)));
    std::vector<double> q(static_cast<std::size_t>(start / 2 + 2), 0.0);
    q[1] = 1.0;
    for (std::size_t i = 1; i + 1 < q.size(); ++i) {
        q[i + 1] = q[i] * (order + static_cast<double>(i)) / static_cast<double>(i + 1);
    }

    double f_above = 0.0;
    double f = 1e-30;
    double norm_sum = 0.0;
    for (int k = start; k >= 1; --k) {
        if (k % 2 == 0) {
            const auto i = static_cast<std::size_t>(k / 2);
            norm_sum += (order + k) * q[i] * f;
        }
        const double f_below = 2.0 * (order + k) / x * f - f_above;
        f_above = f;
        f = f_below;
        if (std::abs(f) > 1e250) {
            f *= 1e-250;
            f_above *= 1e-250;
            norm_sum *= 1e-250;
        }
    }
    norm_sum += f;  // i = 0 weight is 1
    const double lead = std::exp(order * std::log(0.5 * x)) / gamma(order + 1.0);
    return f * lead / norm_sum;
}

}  // namespace

void EvalPolicy::validate() const {
    if (!(rel_tol > 0.0)) {
        throw ParameterError("EvalPolicy: rel_tol must be > 0");
    }
    if (!(abs_tol >= 0.0)) {
        throw ParameterError("EvalPolicy: abs_tol must be >= 0");
    }
    if (max_terms < 1) {
        throw ParameterError("EvalPolicy: max_terms must be >= 1");
    }
    if (!(cancellation_guard >= 1.0)) {
        throw ParameterError("EvalPolicy: cancellation_guard must be >= 1");
    }
    if (!(large_arg_threshold > 0.0) || !(quadrature_arg_limit > 0.0)) {
        throw ParameterError("EvalPolicy: regime thresholds must be > 0");
    }
    if (!(quadrature_rel_tol > 0.0)) {
        throw ParameterError("EvalPolicy: quadrature_rel_tol must be > 0");
    }
}

double gamma(double x) {
    if (std::isnan(x)) {
        throw DomainError("gamma: NaN argument");
    }
    if (is_nonpositive_integer(x)) {
        throw PoleError("gamma: pole at nonpositive integer " + std::to_string(x));
    }
    if (x > 171.62) {
        throw OverflowError("gamma: result exceeds double range");
    }
    double result;
    if (x < 0.5) {
        result = kPi / (sin_pi(x) * gamma(1.0 - x));
    } else if (x == std::floor(x)) {
        result = 1.0;
        for (double k = 2.0; k < x; k += 1.0) {
            result *= k;
        }
    } else {
        double y = x;
        double product = 1.0;
        while (y > 30.0) {
            y -= 1.0;
            product *= y;
        }
        result = product * gamma_lanczos(y);
    }
    if (!std::isfinite(result)) {
        throw OverflowError("gamma: result exceeds double range");
    }
    return result;
}

double log_abs_gamma(double x, int* sign) {
    if (std::isnan(x)) {
        throw DomainError("log_abs_gamma: NaN argument");
    }
    if (is_nonpositive_integer(x)) {
        throw PoleError("log_abs_gamma: pole at nonpositive integer " + std::to_string(x));
    }
    if (x < 0.5) {
        const double s = sin_pi(x);
        if (sign != nullptr) {
            *sign = s < 0.0 ? -1 : 1;
        }
        return std::log(kPi / std::abs(s)) - log_abs_gamma(1.0 - x, nullptr);
    }
    if (sign != nullptr) {
        *sign = 1;
    }
    if (x < 100.0) {
        return std::log(gamma_lanczos(x));
    }
    const double xm1 = x - 1.0;
    double series = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) {
        series += kLanczos[i] / (xm1 + static_cast<double>(i));
    }
    const double t = xm1 + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (xm1 + 0.5) * std::log(t) - t + std::log(series);
}

double reciprocal_gamma(double x) {
    if (is_nonpositive_integer(x)) {
        return 0.0;
    }
    if (x > 171.62) {
        return 0.0;
    }
    return 1.0 / gamma(x);
}

double digamma(double x) {
    if (std::isnan(x)) {
        throw DomainError("digamma: NaN argument");
    }
    if (is_nonpositive_integer(x)) {
        throw PoleError("digamma: pole at nonpositive integer " + std::to_string(x));
    }
    if (x < 0.0) {
        return digamma(1.0 - x) - kPi * cos_pi(x) / sin_pi(x);
    }
    double shift = 0.0;
    while (x < 10.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double inv2 = 1.0 / (x * x);
    // Bernoulli tail: B_{2k} / (2k x^{2k}), k = 1..7.
    const double tail =
        inv2 * (1.0 / 12 -
                inv2 * (1.0 / 120 -
                        inv2 * (1.0 / 252 -
                                inv2 * (1.0 / 240 -
                                        inv2 * (1.0 / 132 -
                                                inv2 * (691.0 / 32760 - inv2 / 12.0))))));
    return shift + std::log(x) - 0.5 / x - tail;
}

double pochhammer(double a, int k) {
    if (k < 0) {
        throw DomainError("pochhammer: k must be >= 0");
    }
    double result = 1.0;
    for (int j = 0; j < k; ++j) {
        result *= a + j;
    }
    return result;
}

double bessel_j(double order, double x) {
    if (std::isnan(order) || order < -0.5) {
        throw DomainError("bessel_j: order must be >= -1/2");
    }
    if (std::isnan(x) || x < 0.0) {
        throw DomainError("bessel_j: argument must be >= 0");
    }
    if (std::isinf(x)) {
        return 0.0;
    }
    if (x == 0.0) {
        if (order == 0.0) {
            return 1.0;
        }
        if (order > 0.0) {
            return 0.0;
        }
        throw DomainError("bessel_j: unbounded at x = 0 for negative order");
    }
    if (order == -0.5) {
        return std::sqrt(2.0 / (kPi * x)) * std::cos(x);
    }
    if (order == 0.5) {
        return std::sqrt(2.0 / (kPi * x)) * std::sin(x);
    }
    if (x <= 4.0) {
        return bessel_series(order, x);
    }
    if (x >= 25.0 && x >= 0.5 * order * order) {
        double value;
        if (bessel_hankel(order, x, value)) {
            return value;
        }
    }
    return bessel_miller(order, x);
}

SeriesValue hyp_pfq(std::span<const double> a, std::span<const double> b, double z,
                    const EvalPolicy& policy) {
    policy.validate();
    if (!std::isfinite(z)) {
        throw DomainError("hyp_pfq: z must be finite");
    }
    for (double bj : b) {
        if (is_nonpositive_integer(bj)) {
            const double limit = -bj;
            const bool dominated = std::any_of(a.begin(), a.end(), [&](double ai) {
                return is_nonpositive_integer(ai) && -ai <= limit;
            });
            if (!dominated) {
                throw ParameterError("hyp_pfq: denominator parameter " + std::to_string(bj) +
                                     " is a nonpositive integer");
            }
        }
    }

    // Neumaier-compensated running sum.
    double sum = 1.0;
    double carry = 0.0;
    double term = 1.0;
    double max_abs_term = 1.0;
    double weighted_abs = 1.0;  // sum (k+1)|t_k|, feeds the rounding estimate
    int small_streak = 0;
    int k = 0;
    bool terminated = false;
    const double ops_per_term = static_cast<double>(a.size() + b.size() + 2);

    for (;;) {
        if (k + 1 >= policy.max_terms) {
            throw ConvergenceError("hyp_pfq: no convergence within max_terms = " +
                                   std::to_string(policy.max_terms));
        }
        double ratio = z / static_cast<double>(k + 1);
        for (double ai : a) {
            ratio *= ai + k;
        }
        for (double bj : b) {
            ratio /= bj + k;
        }
        term *= ratio;
        ++k;
        if (term == 0.0) {
            terminated = true;
            break;
        }
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term)) {
            carry += (sum - t) + term;
        } else {
            carry += (term - t) + sum;
        }
        sum = t;
        max_abs_term = std::max(max_abs_term, std::abs(term));
        weighted_abs += static_cast<double>(k + 1) * std::abs(term);

        const double current = std::abs(sum + carry);
        if (std::abs(term) <= policy.rel_tol * current + policy.abs_tol) {
            if (++small_streak == 2) {
                break;
            }
        } else {
            small_streak = 0;
        }
    }

    SeriesValue out;
    out.value = sum + carry;
    out.terms_used = terminated ? k : k + 1;
    const double rounding =
        kUnitRoundoff * (ops_per_term * weighted_abs + 2.0 * std::abs(out.value));
    out.est_error = (terminated ? 0.0 : std::abs(term)) + rounding;
    if (terminated && max_abs_term == 1.0 && k == 1) {
        // A zero numerator parameter: the series is the single leading 1.
        out.est_error = 0.0;
    }
    const double magnitude = std::abs(out.value);
    out.reliable = max_abs_term <= policy.cancellation_guard * magnitude &&
                   out.est_error <= policy.rel_tol * magnitude + policy.abs_tol;
    return out;
}

}  // namespace nlap
