#include "nlap/quadrature.hpp"

#include "nlap/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

namespace nlap {

namespace {

// QUADPACK qk21 abscissae and weights.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600317364758, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    double roundoff;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod21(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f_center = f(center);
    double kronrod = kWgk[10] * f_center;
    double gauss = 0.0;
    double abs_sum = kWgk[10] * std::abs(f_center);
    std::array<double, 10> f_left{};
    std::array<double, 10> f_right{};
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        f_left[j] = f(center - dx);
        f_right[j] = f(center + dx);
        const double pair = f_left[j] + f_right[j];
        kronrod += kWgk[j] * pair;
        abs_sum += kWgk[j] * (std::abs(f_left[j]) + std::abs(f_right[j]));
        if (j % 2 == 1) {
            gauss += kWg[j / 2] * pair;
        }
    }
    const double mean = 0.5 * kronrod;
    double asc = kWgk[10] * std::abs(f_center - mean);
    for (std::size_t j = 0; j < 10; ++j) {
        asc += kWgk[j] * (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));
    }
    const double abs_half = std::abs(half);
    const double result = kronrod * half;
    asc *= abs_half;
    abs_sum *= abs_half;
    double error = std::abs((kronrod - gauss) * half);
    if (asc != 0.0 && error != 0.0) {
        error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
    }
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    const double roundoff = 50.0 * kEps * abs_sum;
    if (abs_sum > std::numeric_limits<double>::min() / (50.0 * kEps)) {
        error = std::max(roundoff, error);
    }
    return {a, b, result, error, roundoff};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& options) {
    QuadResult out;
    if (a == b) {
        return out;
    }
    std::priority_queue<Segment> heap;
    Segment first = gauss_kronrod21(f, a, b);
    double total = first.value;
    double total_error = first.error;
    heap.push(first);
    out.evaluations = 21;

    while (total_error > std::max(options.abs_tol, options.rel_tol * std::abs(total))) {
        if (out.subdivisions >= options.max_subdivisions) {
            char message[160];
            std::snprintf(message, sizeof message,
                          "integrate: subdivision budget of %d exhausted (error %.3g, value %.6g)",
                          options.max_subdivisions, total_error, total);
            throw ConvergenceError(message);
        }
        const Segment worst = heap.top();
        if (worst.error <= worst.roundoff) {
            // Every remaining estimate sits at its rounding floor.
            break;
        }
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval cannot be split further in double precision; keep its estimate.
            heap.push(worst);
            break;
        }
        const Segment left = gauss_kronrod21(f, worst.a, mid);
        const Segment right = gauss_kronrod21(f, mid, worst.b);
        out.evaluations += 42;
        ++out.subdivisions;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-accumulate from the segments to shed drift from the running updates.
    double value = 0.0;
    double error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    out.value = value;
    out.est_error = error;
    return out;
}

GaussRule gauss_legendre(int m) {
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(m));
    rule.weights.resize(static_cast<std::size_t>(m));
    const double pi = std::numbers::pi;
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int j = 2; j <= m; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (int j = 2; j <= m; ++j) {
            const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        dp = m * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(m - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(m - 1 - i)] = w;
    }
    return rule;
}

}  // namespace nlap
