#pragma once

#include <functional>
#include <vector>

namespace nlap {

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 10000;
};

struct QuadResult {
    double value = 0.0;
    double est_error = 0.0;
    int subdivisions = 0;
    int evaluations = 0;
};

/// Globally adaptive 10/21-point Gauss-Kronrod integration of f over [a, b].
/// The interval with the largest error estimate is bisected until the total
/// estimate meets max(abs_tol, rel_tol*|I|). Throws ConvergenceError when the
/// subdivision budget runs out first.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& options = {});

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// m-point Gauss-Legendre rule on [-1, 1].
GaussRule gauss_legendre(int m);

}  // namespace nlap
