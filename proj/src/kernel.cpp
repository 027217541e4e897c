#include "nlap/kernel.hpp"

#include "nlap/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace nlap {

double KernelExponent::value() const {
    if (neg_inf_) {
        throw DomainError("kernel exponent is -inf; no finite value");
    }
    return beta_;
}

std::string KernelExponent::to_string() const {
    if (neg_inf_) {
        return "-inf";
    }
    std::ostringstream os;
    os.precision(17);
    os << beta_;
    return os.str();
}

void KernelParams::validate() const {
    if (n < 1) {
        throw ParameterError("n must be >= 1");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw ParameterError("delta must be finite and > 0");
    }
    if (beta.is_neg_inf()) {
        return;
    }
    const double b = beta.value();
    if (!std::isfinite(b)) {
        throw ParameterError("beta must be finite or -inf (beta = +inf has no limiting operator)");
    }
    // Excluded lattice n+4, n+6, ...: (n+4-beta)/2 would be a nonpositive integer.
    const double offset = b - n;
    if (offset >= 4.0 - kExcludedBetaTol) {
        const double j = std::round(offset / 2.0);
        if (j >= 2.0 && std::abs(offset - 2.0 * j) <= kExcludedBetaTol) {
            std::ostringstream os;
            os << "beta = " << b << " is excluded: beta must not equal n+" << 2 * j
               << " (the set n+4, n+6, ... is excluded)";
            throw ParameterError(os.str());
        }
    }
}

bool KernelParams::is_local() const {
    return beta.is_finite() && std::abs(beta.value() - (n + 2)) <= kLocalBetaTol;
}

bool KernelParams::has_integral_form() const {
    return beta.is_finite() && beta.value() < n + 2;
}

void KernelParams::require_integral_form(const char* what) const {
    if (!has_integral_form()) {
        std::ostringstream os;
        os << what << ": requires finite beta < n+2 (got beta = " << beta.to_string()
           << ", n = " << n << ")";
        throw DomainError(os.str());
    }
}

double KernelParams::series_a() const { return 0.5 * (n + 2 - beta.value()); }

std::optional<KernelExponent> parse_kernel_exponent(const std::string& text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "-inf" || lower == "-infinity" || lower == "neg_inf") {
        return KernelExponent::neg_inf();
    }
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
        return std::nullopt;
    }
    return KernelExponent::finite(value);
}

}  // namespace nlap
