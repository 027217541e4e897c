#include "mp_oracle.hpp"
#include "nlap/errors.hpp"
#include "nlap/kernel.hpp"
#include "nlap/multipliers.hpp"
#include "nlap/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace {

using nlap::KernelExponent;
using nlap::KernelParams;
using nlap::MultiplierMethod;
constexpr double kPi = std::numbers::pi;

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

TEST(Quadrature, EndpointSingularities) {
    const auto r = nlap::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    EXPECT_NEAR(r.value, 2.0, 1e-10);
    const auto l = nlap::integrate([](double x) { return std::log(x); }, 0.0, 1.0);
    EXPECT_NEAR(l.value, -1.0, 1e-10);
    EXPECT_EQ(nlap::integrate([](double) { return 1.0; }, 3.0, 3.0).value, 0.0);
}

TEST(Quadrature, BudgetExhaustionThrows) {
    nlap::QuadOptions opts;
    opts.max_subdivisions = 5;
    opts.abs_tol = 1e-14;
    opts.rel_tol = 1e-14;
    EXPECT_THROW(nlap::integrate([](double x) { return std::sin(1e4 * x * x); }, 0.0, 10.0, opts),
                 nlap::ConvergenceError);
}

TEST(Quadrature, GaussLegendreIsExactForPolynomials) {
    for (int m : {1, 2, 5, 16, 33}) {
        const auto rule = nlap::gauss_legendre(m);
        for (int p = 0; p <= 2 * m - 1; ++p) {
            double sum = 0.0;
            for (int i = 0; i < m; ++i) {
                sum += rule.weights[i] * std::pow(rule.nodes[i], p);
            }
            const double want = p % 2 == 1 ? 0.0 : 2.0 / (p + 1);
            EXPECT_NEAR(sum, want, 1e-14) << "m " << m << " p " << p;
        }
    }
}

TEST(Kernel, Validation) {
    EXPECT_NO_THROW(KernelParams(1, 0.1, 3.0).validate());
    EXPECT_NO_THROW(KernelParams(2, 0.1, 4.7).validate());
    EXPECT_NO_THROW(KernelParams(2, 0.1, KernelExponent::neg_inf()).validate());
    EXPECT_THROW(KernelParams(1, 0.1, 5.0).validate(), nlap::ParameterError);
    EXPECT_THROW(KernelParams(2, 0.1, 8.0).validate(), nlap::ParameterError);
    EXPECT_THROW(KernelParams(0, 0.1, 0.0).validate(), nlap::ParameterError);
    EXPECT_THROW(KernelParams(1, 0.0, 0.0).validate(), nlap::ParameterError);
    EXPECT_THROW(KernelParams(1, 0.1, std::numeric_limits<double>::infinity()).validate(),
                 nlap::ParameterError);
    EXPECT_TRUE(KernelParams(3, 1.0, 5.0).is_local());
    EXPECT_FALSE(KernelParams(3, 1.0, 5.5).has_integral_form());
    EXPECT_THROW(KernelExponent::neg_inf().value(), nlap::DomainError);
}

TEST(Kernel, ParseExponent) {
    EXPECT_EQ(nlap::parse_kernel_exponent("-inf"), KernelExponent::neg_inf());
    EXPECT_EQ(nlap::parse_kernel_exponent("-INF"), KernelExponent::neg_inf());
    EXPECT_EQ(nlap::parse_kernel_exponent("2.5"), KernelExponent::finite(2.5));
    EXPECT_FALSE(nlap::parse_kernel_exponent("inf").has_value());
    EXPECT_FALSE(nlap::parse_kernel_exponent("nan").has_value());
    EXPECT_FALSE(nlap::parse_kernel_exponent("2x").has_value());
}

TEST(ScalingConstant, ClosedForms) {
    EXPECT_NEAR(nlap::scaling_constant(KernelParams(1, 1.0, 0.0)), 3.0, 1e-14);
    EXPECT_NEAR(nlap::scaling_constant(KernelParams(2, 1.0, 2.0)), 4.0 / kPi, 1e-14);
    EXPECT_NEAR(nlap::scaling_constant(KernelParams(1, 2.0, 0.0)), 3.0 / 8.0, 1e-15);
}

TEST(Multiplier, ZeroAndLocal) {
    for (double beta : {-3.0, 0.0, 1.0, 2.5, 4.0}) {
        EXPECT_EQ(nlap::multiplier(KernelParams(1, 0.3, beta), 0.0).value, 0.0);
    }
    const auto local = nlap::multiplier(KernelParams(3, 0.7, 5.0), 4.0);
    EXPECT_EQ(local.value, -16.0);
    EXPECT_EQ(local.method, MultiplierMethod::ExactLocal);
    EXPECT_THROW(nlap::multiplier(KernelParams(1, 0.1, 5.0), 1.0), nlap::ParameterError);
    EXPECT_THROW(nlap::multiplier(KernelParams(1, 0.1, 1.0), -1.0), nlap::DomainError);
}

TEST(Multiplier, SeriesMatchesQuadratureOracle) {
    const KernelParams p(1, 0.1, 1.0);
    const auto r = nlap::multiplier(p, 10.0);
    EXPECT_EQ(r.method, MultiplierMethod::Series);
    EXPECT_LT(rel(r.value, nlap::multiplier_quadrature_oracle(p, 10.0, 1e-12)), 1e-8);
    EXPECT_LT(rel(r.value, -95.9246968002258903775463544773), 1e-13);
}

TEST(Multiplier, DispatchRoutes) {
    const KernelParams p(2, 0.1, 1.0);
    EXPECT_EQ(nlap::multiplier(p, 50.0).method, MultiplierMethod::Series);
    EXPECT_EQ(nlap::multiplier(p, 1000.0).method, MultiplierMethod::Quadrature);
    EXPECT_EQ(nlap::multiplier(p, 1e6).method, MultiplierMethod::Asymptotic);
    EXPECT_EQ(nlap::multiplier(KernelParams(2, 0.1, KernelExponent::neg_inf()), 10.0).method,
              MultiplierMethod::LimitBessel);
}

TEST(Multiplier, AgreesWithHundredDigitSeriesAcrossRoutes) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> ubeta(-4.0, 7.9);
    std::uniform_real_distribution<double> ulogx(-2.0, std::log10(30.0));
    for (int i = 0; i < 150; ++i) {
        const int n = 1 + i % 3;
        const double beta = ubeta(rng);
        const KernelParams p(n, 0.2, beta);
        if (std::abs(beta - (n + 4)) < 0.05) {
            continue;
        }
        const double x = std::pow(10.0, ulogx(rng));
        const double nu = 2 * x / p.delta;
        const auto got = nlap::multiplier(p, nu);
        const double want = static_cast<double>(nlap::testing::multiplier_mp(n, p.delta, beta, nu));
        EXPECT_LE(std::abs(got.value - want), 1e-10 * std::abs(want))
            << "n " << n << " beta " << beta << " nu " << nu << " via " << to_string(got.method);
    }
}

// 60-digit mpmath values on the integral route, |nu| delta/2 between 1000 and 2000.
TEST(Multiplier, LargeArgumentReferenceValues) {
    struct Case {
        int n;
        double delta, beta, nu, want;
    };
    const Case cases[] = {
        {1, 0.1, 4.0, 39980.0, -3346008128505.3270849},
        {2, 0.2, 5.5, 10000.0, -4073426822619.7290457},
        {3, 0.05, 2.5, 40000.0, -11663.699976873609518},
        {1, 1.0, 2.9, 3998.0, -7664710.9401596931304},
        {2, 0.1, -3.0, 30000.0, -559.98852076858578341},
        {3, 0.2, 7.3, 12000.0, 2026986312534070.5377},
    };
    for (const Case& c : cases) {
        const auto got = nlap::multiplier(KernelParams(c.n, c.delta, c.beta), c.nu);
        EXPECT_EQ(got.method, MultiplierMethod::Quadrature);
        EXPECT_LT(rel(got.value, c.want), 1e-10) << "n " << c.n << " beta " << c.beta;
        EXPECT_LE(std::abs(got.value - c.want), got.est_error + 1e-12 * std::abs(c.want));
    }
}

TEST(QuadratureOracle, ElementaryAndTwoDimensional) {
    EXPECT_EQ(nlap::multiplier_quadrature_oracle(KernelParams(1, 1.0, 0.0), 0.0, 1e-10), 0.0);
    EXPECT_NEAR(nlap::multiplier_quadrature_oracle(KernelParams(1, 1.0, 0.0), kPi, 1e-12), -6.0,
                1e-10);
    EXPECT_THROW(nlap::multiplier_quadrature_oracle(KernelParams(1, 1.0, 3.0), 1.0, 1e-10),
                 nlap::DomainError);

    // Polar tensor grid over the disk of (cos(nu.z) - 1)/|z|^beta, two directions of |nu| = 7.
    const KernelParams p(2, 0.5, 1.0);
    const double c = nlap::scaling_constant(p);
    const auto radial = nlap::gauss_legendre(48);
    const int m = 256;
    auto disk = [&](double nx, double ny) {
        double sum = 0.0;
        for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
            const double r = 0.5 * p.delta * (radial.nodes[i] + 1.0);
            double ring = 0.0;
            for (int j = 0; j < m; ++j) {
                const double th = 2 * kPi * j / m;
                ring += std::cos(r * (nx * std::cos(th) + ny * std::sin(th))) - 1.0;
            }
            sum += radial.weights[i] * 0.5 * p.delta * std::pow(r, 1.0 - p.beta.value()) * ring *
                   2 * kPi / m;
        }
        return c * sum;
    };
    const double along_axis = disk(7.0, 0.0);
    const double diagonal = disk(7.0 / std::sqrt(2.0), 7.0 / std::sqrt(2.0));
    EXPECT_NEAR(along_axis, diagonal, 1e-10);
    EXPECT_LT(rel(nlap::multiplier_quadrature_oracle(p, 7.0, 1e-12), along_axis), 1e-9);
    EXPECT_LT(rel(nlap::multiplier(p, 7.0).value, -31.2232355897460920989219860163), 1e-13);
}

TEST(LimitMultiplier, ClosedFormsAndSwitch) {
    EXPECT_EQ(nlap::multiplier_limit_beta_neg_inf(2, 0.3, 0.0).value, 0.0);
    for (double delta : {0.01, 0.1, 2.0}) {
        for (double nu : {1e-3, 0.05, 1.0, 37.0, 999.0}) {
            const double want = 2 * (std::cos(nu * delta) - 1) / (delta * delta);
            EXPECT_NEAR(nlap::multiplier_limit_beta_neg_inf(1, delta, nu).value, want,
                        1e-12 * std::max(1.0, 4 / (delta * delta)));
        }
    }
    // Bessel form against the 1F2 kernel at n = 2, delta = 1, |nu| = 5.
    const double bessel = nlap::multiplier_limit_beta_neg_inf(2, 1.0, 5.0).value;
    const double series = -25.0 * nlap::detail::limit_kernel_tail(2, -6.25, 0);
    EXPECT_LT(rel(bessel, series), 1e-10);
    // Continuity across the small-argument switch at |nu| delta = 1e-2.
    const double below = nlap::multiplier_limit_beta_neg_inf(3, 1.0, 1e-2 * (1 - 1e-9)).value;
    const double above = nlap::multiplier_limit_beta_neg_inf(3, 1.0, 1e-2 * (1 + 1e-9)).value;
    EXPECT_LT(rel(below, above), 1e-7);
}

TEST(Asymptotics, LargeNuConstants) {
    // Constant term -2n(n+2-beta)/(delta^2(n-beta)) for n=1, delta=1, beta=0.
    const KernelParams p(1, 1.0, 0.0);
    EXPECT_NEAR(nlap::asymptotic_large_nu(p, 1e12), -6.0, 1e-9);
    const double nu = 100.0;
    const double want =
        -(4 / 0.01) * (2 * std::log(nu) + std::log(0.0025) + std::numbers::egamma + std::numbers::egamma);
    EXPECT_LT(rel(nlap::asymptotic_large_nu(KernelParams(2, 0.1, 2.0), nu), want), 1e-14);
    EXPECT_THROW(nlap::asymptotic_large_nu(KernelParams(1, 0.1, 3.0), 1.0), nlap::DomainError);
}

TEST(Asymptotics, LinearGrowthForBetaNPlusOne) {
    // n=1, delta=0.1, beta=2: 2(2/delta) Gamma(3/2)^2 / ((-1) Gamma(1)) |nu| = -(10 pi) |nu|.
    const KernelParams p(1, 0.1, 2.0);
    const double slope = 2 * (2 / 0.1) * std::tgamma(1.5) * std::tgamma(1.5) / (-1.0);
    EXPECT_NEAR(slope, -10 * kPi, 1e-12);
    const double constant = -2.0 * 1 * 1 / (0.01 * -1.0);
    for (double nu : {200.0, 400.0, 800.0}) {
        EXPECT_NEAR(nlap::asymptotic_large_nu(p, nu), constant + slope * nu, 1e-9 * nu);
    }
    const double s1 = (nlap::multiplier(p, 800.0).value - nlap::multiplier(p, 400.0).value) / 400;
    const double s0 = (nlap::multiplier(p, 400.0).value - nlap::multiplier(p, 200.0).value) / 200;
    EXPECT_NEAR(s1, slope, 1e-2 * std::abs(slope));
    EXPECT_NEAR(s0, slope, 2e-2 * std::abs(slope));
}

TEST(Asymptotics, SmallNu) {
    const KernelParams p(1, 1.0, 0.0);
    EXPECT_EQ(nlap::asymptotic_small_nu(p, 0.0), 0.0);
    EXPECT_EQ(nlap::asymptotic_small_nu(KernelParams(2, 1.0, 4.0), 3.0), -9.0);
    const double nu = 0.1;
    EXPECT_LE(std::abs(nlap::asymptotic_small_nu(p, nu) - nlap::multiplier(p, nu).value),
              1e-6 * nu * nu);
}

TEST(Asymptotics, LimitLargeNu) {
    for (double nu : {3.0, 50.0, 1234.0}) {
        EXPECT_NEAR(nlap::asymptotic_limit_large_nu(1, 0.1, nu),
                    2 * (std::cos(0.1 * nu) - 1) / 0.01, 1e-10);
    }
    EXPECT_NEAR(nlap::asymptotic_limit_large_nu(3, 0.5, 1e12), -24.0, 1e-6);
    EXPECT_THROW(nlap::asymptotic_limit_large_nu(2, 0.1, 0.0), nlap::DomainError);
}

// The Bessel remainder decays like |nu|^{-(n+1)/2}: sup over dyadic windows, scaled by
// |nu|^{3/2}, is flat for n = 2, whereas scaling by |nu|^2 grows.
TEST(Asymptotics, LimitRemainderOrder) {
    std::vector<double> scaled15, scaled2;
    for (double base = 500.0; base <= 8000.0; base *= 2) {
        double sup = 0.0;
        for (int i = 0; i < 2000; ++i) {
            const double nu = base * (1 + i / 2000.0);
            const double d = std::abs(nlap::asymptotic_limit_large_nu(2, 0.1, nu) -
                                      nlap::multiplier_limit_beta_neg_inf(2, 0.1, nu).value);
            sup = std::max(sup, d * std::pow(nu, 1.5));
        }
        scaled15.push_back(sup);
        scaled2.push_back(sup * std::sqrt(base));
    }
    for (std::size_t i = 1; i < scaled15.size(); ++i) {
        EXPECT_NEAR(scaled15[i] / scaled15[0], 1.0, 0.02);
        EXPECT_GT(scaled2[i] / scaled2[i - 1], 1.35);
    }
}

TEST(Invariants, ScalingIdentityAndMonotonicity) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ubeta(-5.0, 2.9);
    std::uniform_real_distribution<double> ulog(-1.0, 2.5);
    for (int i = 0; i < 100; ++i) {
        const int n = 1 + i % 3;
        const double beta = ubeta(rng) + (n - 1);
        const double delta = std::pow(10.0, ulog(rng) - 2.0);
        const double nu = std::pow(10.0, ulog(rng));
        const double m = nlap::multiplier(KernelParams(n, delta, beta), nu).value;
        const double m1 = nlap::multiplier(KernelParams(n, 1.0, beta), delta * nu).value;
        EXPECT_LE(std::abs(m - m1 / (delta * delta)), 1e-12 * std::max(1.0, std::abs(m)));
        const double lower = nlap::multiplier(KernelParams(n, delta, beta - 0.5), nu).value;
        EXPECT_LT(m, lower);
    }
}

}  // namespace
