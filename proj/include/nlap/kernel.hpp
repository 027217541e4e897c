#pragma once

#include <optional>
#include <string>

namespace nlap {

/// Kernel exponent: a finite real or the limiting value beta = -infinity.
class KernelExponent {
public:
    static KernelExponent finite(double beta) { return KernelExponent(beta, false); }
    static KernelExponent neg_inf() { return KernelExponent(0.0, true); }

    bool is_neg_inf() const { return neg_inf_; }
    bool is_finite() const { return !neg_inf_; }
    /// Throws DomainError for the -infinity variant.
    double value() const;

    std::string to_string() const;

    friend bool operator==(const KernelExponent&, const KernelExponent&) = default;

private:
    KernelExponent(double beta, bool neg_inf) : beta_(beta), neg_inf_(neg_inf) {}

    double beta_;
    bool neg_inf_;
};

/// Tolerances used when classifying beta relative to the lattice n+2, n+4, ...
inline constexpr double kExcludedBetaTol = 1e-9;
inline constexpr double kLocalBetaTol = 1e-12;

struct KernelParams {
    int n = 1;
    double delta = 1.0;
    KernelExponent beta = KernelExponent::finite(0.0);

    KernelParams() = default;
    KernelParams(int dim, double horizon, double exponent)
        : n(dim), delta(horizon), beta(KernelExponent::finite(exponent)) {}
    KernelParams(int dim, double horizon, KernelExponent exponent)
        : n(dim), delta(horizon), beta(exponent) {}

    /// Throws ParameterError naming the violated rule.
    void validate() const;

    /// beta within kLocalBetaTol of n+2 (operator equals the Laplacian).
    bool is_local() const;
    /// beta < n+2, where the integral definition of the operator applies.
    bool has_integral_form() const;
    /// Requires has_integral_form(); throws DomainError otherwise.
    void require_integral_form(const char* what) const;

    /// (n+2-beta)/2, the second numerator parameter of the 2F3 representation.
    double series_a() const;
    /// (n+2)/2.
    double series_b() const { return 0.5 * (n + 2); }
};

/// Parses "-inf" (any case) or a decimal number. Rejects +inf and NaN.
std::optional<KernelExponent> parse_kernel_exponent(const std::string& text);

}  // namespace nlap
