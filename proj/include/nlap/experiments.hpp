#pragma once

#include "nlap/kernel.hpp"
#include "nlap/report.hpp"
#include "nlap/spectral.hpp"

#include <Eigen/Dense>

#include <numbers>
#include <vector>

namespace nlap {

enum class Spacing { Linear, Log };

enum class SweepOutput { Multiplier, AsymptoteLarge, AsymptoteSmall, LimitNegInf, Oracle };

struct SweepSpec {
    std::vector<KernelParams> params;
    double nu_min = 1.0;
    double nu_max = 318.0 * std::numbers::pi;
    int count = 1000;
    Spacing spacing = Spacing::Linear;
    std::vector<SweepOutput> outputs = {SweepOutput::Multiplier};
    EvalPolicy policy;
    double oracle_tol = 1e-10;

    void validate() const;
    Eigen::VectorXd grid() const;
};

/// Rows (n, delta, beta, nu, multiplier, method, requested comparison curves...).
/// Curves that do not apply to a parameter set are left empty.
StudyReport figure_multiplier_sweep(const SweepSpec& spec);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// Euclidean norm of the residual vector.
    double residual = 0.0;
};

/// Least-squares y ~ slope*x + intercept.
LinearFit fit_line(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// e(delta) = |u^{delta,beta} - u|_{H^{s'}} with s' = s + max(0, beta-n), u the
/// local solution. Rows (delta, error, slope) with the slope between consecutive
/// rungs; meta carries the least-squares log-log slope and its residual.
StudyReport convergence_study_delta(const TorusSpec& torus, double beta, const GridField& f,
                                    const std::vector<double>& delta_ladder, double s = 0.0,
                                    const EvalPolicy& policy = {});

/// e(beta) = |u^{delta,beta} - u|_{H^{s'}} with s' = s + 2 - epsilon, n < beta <= n+2.
/// Checks that e decreases strictly along the ladder and that the multipliers
/// decrease in beta at every stored mode k != 0.
StudyReport convergence_study_beta(const TorusSpec& torus, double delta, const GridField& f,
                                   const std::vector<double>& beta_ladder, double epsilon,
                                   double s = 0.0, const EvalPolicy& policy = {});

/// Multipliers for each finite beta <= -10 and for beta = -inf on the given |nu| grid.
/// Checks that the sup-distance to the limit shrinks along the ladder as beta decreases;
/// records the tail oscillation of the limit column.
StudyReport neg_inf_limit_study(int n, double delta, const std::vector<double>& beta_ladder,
                                const std::vector<double>& nu_grid,
                                const EvalPolicy& policy = {});

}  // namespace nlap
