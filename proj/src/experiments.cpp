#include "nlap/experiments.hpp"

#include "nlap/errors.hpp"
#include "nlap/multipliers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace nlap {

namespace {

std::string beta_label(double beta) { return KernelExponent::finite(beta).to_string(); }

void require_mean_zero_grid(const TorusSpec& torus, const GridField& f, const char* what) {
    torus.validate();
    if (!(f.torus == torus) || f.samples.size() != torus.size()) {
        throw ShapeError(std::string(what) + ": field does not live on the given torus");
    }
}

SpectralField difference(const SpectralField& a, const SpectralField& b) {
    return {a.torus, a.coeffs - b.coeffs};
}

SpectralField local_solution(const SpectralField& f_hat) {
    return solve_poisson(f_hat, KernelParams(f_hat.torus.n, 1.0, f_hat.torus.n + 2.0));
}

}  // namespace

void SweepSpec::validate() const {
    if (params.empty()) {
        throw ParameterError("sweep: at least one parameter set is required");
    }
    for (const KernelParams& p : params) {
        p.validate();
    }
    if (count < 2) {
        throw ParameterError("sweep: count must be >= 2");
    }
    if (!(nu_min < nu_max) || !std::isfinite(nu_min) || !std::isfinite(nu_max)) {
        throw ParameterError("sweep: need finite nu_min < nu_max");
    }
    if (nu_min < 0.0) {
        throw ParameterError("sweep: nu_min must be >= 0");
    }
    const bool large = std::find(outputs.begin(), outputs.end(), SweepOutput::AsymptoteLarge) !=
                       outputs.end();
    if (nu_min <= 0.0 && (spacing == Spacing::Log || large)) {
        throw ParameterError(
            "sweep: nu_min must be > 0 for log spacing or the large-|nu| asymptote");
    }
    policy.validate();
}

Eigen::VectorXd SweepSpec::grid() const {
    if (spacing == Spacing::Log) {
        return Eigen::VectorXd::LinSpaced(count, std::log(nu_min), std::log(nu_max))
            .array()
            .exp()
            .matrix();
    }
    return Eigen::VectorXd::LinSpaced(count, nu_min, nu_max);
}

StudyReport figure_multiplier_sweep(const SweepSpec& spec) {
    spec.validate();
    StudyReport report;
    report.name = "multiplier_sweep";
    report.columns = {"n", "delta", "beta", "nu"};
    for (SweepOutput out : spec.outputs) {
        switch (out) {
            case SweepOutput::Multiplier:
                report.columns.insert(report.columns.end(), {"multiplier", "method", "est_error"});
                break;
            case SweepOutput::AsymptoteLarge: report.columns.push_back("asymptote_large"); break;
            case SweepOutput::AsymptoteSmall: report.columns.push_back("asymptote_small"); break;
            case SweepOutput::LimitNegInf: report.columns.push_back("limit_neg_inf"); break;
            case SweepOutput::Oracle: report.columns.push_back("oracle"); break;
        }
    }
    const Eigen::VectorXd nus = spec.grid();
    for (const KernelParams& p : spec.params) {
        for (Eigen::Index i = 0; i < nus.size(); ++i) {
            const double nu = nus[i];
            std::vector<Cell> row = {static_cast<double>(p.n), p.delta, p.beta.to_string(), nu};
            for (SweepOutput out : spec.outputs) {
                switch (out) {
                    case SweepOutput::Multiplier: {
                        const MultiplierResult m = multiplier(p, nu, spec.policy);
                        row.insert(row.end(), {m.value, std::string(to_string(m.method)),
                                               m.est_error});
                        break;
                    }
                    case SweepOutput::AsymptoteLarge:
                        if (p.beta.is_neg_inf()) {
                            row.push_back(asymptotic_limit_large_nu(p.n, p.delta, nu));
                        } else if (p.is_local()) {
                            row.push_back(std::monostate{});
                        } else {
                            row.push_back(asymptotic_large_nu(p, nu));
                        }
                        break;
                    case SweepOutput::AsymptoteSmall:
                        row.push_back(asymptotic_small_nu(p, nu));
                        break;
                    case SweepOutput::LimitNegInf:
                        row.push_back(multiplier_limit_beta_neg_inf(p.n, p.delta, nu).value);
                        break;
                    case SweepOutput::Oracle:
                        if (p.has_integral_form()) {
                            row.push_back(multiplier_quadrature_oracle(p, nu, spec.oracle_tol));
                        } else {
                            row.push_back(std::monostate{});
                        }
                        break;
                }
            }
            report.add_row(std::move(row));
        }
    }
    report.add_meta("points_per_parameter_set", static_cast<double>(nus.size()));
    return report;
}

LinearFit fit_line(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ShapeError("fit_line: need two equally long vectors with at least two entries");
    }
    Eigen::MatrixXd design(x.size(), 2);
    design.col(0) = x;
    design.col(1).setOnes();
    const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(y);
    LinearFit fit;
    fit.slope = coef[0];
    fit.intercept = coef[1];
    fit.residual = (design * coef - y).norm();
    return fit;
}

StudyReport convergence_study_delta(const TorusSpec& torus, double beta, const GridField& f,
                                    const std::vector<double>& delta_ladder, double s,
                                    const EvalPolicy& policy) {
    require_mean_zero_grid(torus, f, "convergence_study_delta");
    if (delta_ladder.empty()) {
        throw ParameterError("convergence_study_delta: delta ladder is empty");
    }
    const int n = torus.n;
    if (beta > n + 2.0 + kLocalBetaTol) {
        throw ParameterError("convergence_study_delta: beta must be <= n+2");
    }
    const double s_prime = s + std::max(0.0, beta - n);
    const SpectralField f_hat = forward_transform(f);
    const SpectralField u_local = local_solution(f_hat);

    StudyReport report;
    report.name = "study_delta";
    report.columns = {"delta", "error", "slope"};
    report.add_meta("n", static_cast<double>(n));
    report.add_meta("beta", beta_label(beta));
    report.add_meta("sobolev_index", s_prime);

    std::vector<double> errors;
    for (double delta : delta_ladder) {
        const SpectralField u = solve_poisson(f_hat, KernelParams(n, delta, beta), policy);
        errors.push_back(sobolev_norm(difference(u, u_local), s_prime));
    }
    std::vector<double> log_delta;
    std::vector<double> log_error;
    for (std::size_t i = 0; i < delta_ladder.size(); ++i) {
        Cell slope;
        if (i > 0 && errors[i] > 0.0 && errors[i - 1] > 0.0) {
            slope = std::log(errors[i] / errors[i - 1]) /
                    std::log(delta_ladder[i] / delta_ladder[i - 1]);
        }
        if (errors[i] > 0.0) {
            log_delta.push_back(std::log(delta_ladder[i]));
            log_error.push_back(std::log(errors[i]));
        }
        report.add_row({delta_ladder[i], errors[i], slope});
    }
    if (log_delta.size() >= 2) {
        const LinearFit fit = fit_line(Eigen::Map<Eigen::VectorXd>(log_delta.data(), log_delta.size()),
                                       Eigen::Map<Eigen::VectorXd>(log_error.data(), log_error.size()));
        report.add_meta("fitted_slope", fit.slope);
        report.add_meta("fit_residual", fit.residual);
    }
    return report;
}

StudyReport convergence_study_beta(const TorusSpec& torus, double delta, const GridField& f,
                                   const std::vector<double>& beta_ladder, double epsilon,
                                   double s, const EvalPolicy& policy) {
    require_mean_zero_grid(torus, f, "convergence_study_beta");
    const int n = torus.n;
    if (beta_ladder.empty()) {
        throw ParameterError("convergence_study_beta: beta ladder is empty");
    }
    if (!(epsilon > 0.0 && epsilon < 2.0)) {
        throw ParameterError("convergence_study_beta: epsilon must lie in (0, 2)");
    }
    std::vector<double> ladder = beta_ladder;
    std::sort(ladder.begin(), ladder.end());
    for (double beta : ladder) {
        if (!(beta > n && beta <= n + 2.0 + kLocalBetaTol)) {
            throw ParameterError("convergence_study_beta: ladder entries must satisfy n < beta <= n+2");
        }
    }
    const double s_prime = s + 2.0 - epsilon;
    const SpectralField f_hat = forward_transform(f);
    const SpectralField u_local = local_solution(f_hat);

    StudyReport report;
    report.name = "study_beta";
    report.columns = {"beta", "error", "ratio_to_first"};
    report.add_meta("n", static_cast<double>(n));
    report.add_meta("delta", delta);
    report.add_meta("epsilon", epsilon);
    report.add_meta("sobolev_index", s_prime);

    std::vector<Eigen::ArrayXd> eigenvalues;
    std::vector<double> errors;
    for (double beta : ladder) {
        eigenvalues.push_back(eigenvalue_array(torus, KernelParams(n, delta, beta), policy));
        const SpectralField u = solve_poisson(f_hat, eigenvalues.back());
        errors.push_back(sobolev_norm(difference(u, u_local), s_prime));
    }
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        Cell ratio;
        if (errors.front() > 0.0) {
            ratio = errors[i] / errors.front();
        }
        report.add_row({ladder[i], errors[i], ratio});
    }

    bool decreasing = true;
    for (std::size_t i = 1; i < errors.size(); ++i) {
        decreasing = decreasing && errors[i] < errors[i - 1];
    }
    report.check(decreasing, "error is not strictly decreasing in beta");

    // Side table: m(nu_k) strictly decreasing in beta at every mode k != 0.
    const Eigen::ArrayXd radius2 = frequencies(torus).colwise().squaredNorm().transpose().array();
    long checked = 0;
    long violations = 0;
    for (std::size_t i = 1; i < eigenvalues.size(); ++i) {
        for (Eigen::Index k = 0; k < radius2.size(); ++k) {
            if (radius2[k] == 0.0) {
                continue;
            }
            ++checked;
            if (!(eigenvalues[i][k] < eigenvalues[i - 1][k])) {
                ++violations;
            }
        }
    }
    report.add_meta("monotone_pairs_checked", static_cast<double>(checked));
    report.add_meta("monotone_violations", static_cast<double>(violations));
    report.check(violations == 0, "multipliers are not strictly decreasing in beta at every mode");
    return report;
}

StudyReport neg_inf_limit_study(int n, double delta, const std::vector<double>& beta_ladder,
                                const std::vector<double>& nu_grid, const EvalPolicy& policy) {
    KernelParams(n, delta, KernelExponent::neg_inf()).validate();
    if (beta_ladder.empty() || nu_grid.empty()) {
        throw ParameterError("neg_inf_limit_study: beta ladder and nu grid must be nonempty");
    }
    std::vector<double> ladder = beta_ladder;
    std::sort(ladder.begin(), ladder.end(), std::greater<>());
    for (double beta : ladder) {
        if (!(beta <= -10.0)) {
            throw ParameterError("neg_inf_limit_study: ladder entries must be <= -10");
        }
    }

    StudyReport report;
    report.name = "neg_inf_limit";
    report.columns = {"nu"};
    for (double beta : ladder) {
        report.columns.push_back("m[beta=" + beta_label(beta) + "]");
    }
    report.columns.push_back("m[beta=-inf]");
    report.add_meta("n", static_cast<double>(n));
    report.add_meta("delta", delta);

    std::vector<double> sup_distance(ladder.size(), 0.0);
    const double nu_max = *std::max_element(nu_grid.begin(), nu_grid.end());
    const double constant = -2.0 * n / (delta * delta);
    double tail_min = std::numeric_limits<double>::infinity();
    double tail_max = -std::numeric_limits<double>::infinity();
    for (double nu : nu_grid) {
        const double limit = multiplier_limit_beta_neg_inf(n, delta, nu).value;
        std::vector<Cell> row = {nu};
        for (std::size_t j = 0; j < ladder.size(); ++j) {
            const double m = multiplier(KernelParams(n, delta, ladder[j]), nu, policy).value;
            sup_distance[j] = std::max(sup_distance[j], std::abs(m - limit));
            row.push_back(m);
        }
        row.push_back(limit);
        report.add_row(std::move(row));
        if (nu >= 0.1 * nu_max) {
            tail_min = std::min(tail_min, limit);
            tail_max = std::max(tail_max, limit);
        }
    }
    for (std::size_t j = 0; j < ladder.size(); ++j) {
        report.add_meta("sup_distance[beta=" + beta_label(ladder[j]) + "]", sup_distance[j]);
        if (j > 0) {
            report.check(sup_distance[j] < sup_distance[j - 1],
                         "distance to the limit does not shrink from beta=" +
                             beta_label(ladder[j - 1]) + " to beta=" + beta_label(ladder[j]));
        }
    }
    report.add_meta("limit_tail_half_range", 0.5 * (tail_max - tail_min));
    report.add_meta("limit_tail_max_distance_to_constant",
                    std::max(std::abs(tail_max - constant), std::abs(tail_min - constant)));
    return report;
}

}  // namespace nlap
