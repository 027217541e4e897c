#include "nlap/cli.hpp"

#include "nlap/errors.hpp"
#include "nlap/experiments.hpp"
#include "nlap/multipliers.hpp"
#include "nlap/report.hpp"
#include "nlap/spectral.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

namespace nlap {

namespace {

const std::vector<std::string> kCommands = {"multiplier", "sweep",     "solve",
                                            "study-delta", "study-beta", "neginf"};
const std::set<std::string> kFlags = {"--local", "--no-timestamp", "--help", "-h"};

std::string trim(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            continue;
        }
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || !std::isfinite(v)) {
            throw ParameterError(std::string(what) + ": '" + item + "' is not a finite number");
        }
        values.push_back(v);
    }
    if (values.empty()) {
        throw ParameterError(std::string(what) + ": empty list");
    }
    return values;
}

std::vector<std::string> split_names(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

KernelExponent parse_beta(const std::string& text) {
    const auto beta = parse_kernel_exponent(trim(text));
    if (!beta) {
        throw ParameterError("beta: '" + text + "' is neither a finite number nor -inf");
    }
    return *beta;
}

// Splices key=value lines from --config after the command name and glues
// option values that begin with '-' (such as -inf) onto their option.
std::vector<std::string> prepare_tokens(const std::vector<std::string>& args) {
    std::vector<std::string> rest;
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) {
                throw ParameterError("--config needs a file path");
            }
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }

    std::string command;
    std::vector<std::string> from_file;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            throw ParameterError("cannot open config file '" + config_path + "'");
        }
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            line = trim(line.substr(0, line.find('#')));
            if (line.empty()) {
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ParameterError("config line " + std::to_string(line_no) +
                                     ": expected key=value");
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key == "command") {
                command = value;
            } else {
                from_file.push_back("--" + key + "=" + value);
            }
        }
    }

    auto is_command = [](const std::string& t) {
        return std::find(kCommands.begin(), kCommands.end(), t) != kCommands.end();
    };
    auto pos = std::find_if(rest.begin(), rest.end(), is_command);
    if (pos == rest.end() && !command.empty()) {
        rest.insert(rest.begin(), command);
        pos = rest.begin();
    }
    if (pos != rest.end()) {
        rest.insert(pos + 1, from_file.begin(), from_file.end());
    }

    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < rest.size(); ++i) {
        const std::string& t = rest[i];
        if (t.rfind("--", 0) == 0 && t.find('=') == std::string::npos && !kFlags.contains(t) &&
            i + 1 < rest.size() && rest[i + 1].size() > 1 && rest[i + 1][0] == '-' &&
            rest[i + 1][1] != '-') {
            tokens.push_back(t + "=" + rest[i + 1]);
            ++i;
        } else {
            tokens.push_back(t);
        }
    }
    return tokens;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

std::string option_value(const CLI::Option* opt) {
    if (opt->get_type_size() == 0) {
        return opt->count() > 0 && opt->as<bool>() ? "true" : "false";
    }
    if (opt->count() > 0) {
        return opt->results().back();
    }
    return opt->get_default_str();
}

std::string resolved_config(const CLI::App& app, const CLI::App& sub) {
    std::string line = "config: command=" + sub.get_name();
    for (const CLI::App* scope : {&app, &sub}) {
        for (const CLI::Option* opt : scope->get_options()) {
            const std::string name = opt->get_single_name();
            if (name == "help" || name == "config" || name == "no-timestamp" || name == "out") {
                continue;
            }
            line += " " + name + "=" + option_value(opt);
        }
    }
    return line;
}

// Doubles keep their full default in the resolved config line.
CLI::Option* add_number(CLI::App* app, const std::string& name, double& value,
                        const std::string& description) {
    return app->add_option(name, value, description)->default_str(format_number(value));
}

struct FieldSpec {
    std::string field = "sin1";
    int n = 1;
    double length = 2.0 * std::numbers::pi;
    int grid = 0;

    TorusSpec torus(int grid_size) const {
        return TorusSpec::cube(n, length, grid_size > 0 ? grid_size : (n >= 3 ? 32 : 64));
    }
    bool is_named() const { return field == "sin1" || field == "gauss-meanzero"; }
};

GridField read_grid_csv(const TorusSpec& torus, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParameterError("field: '" + path + "' is neither a built-in field nor a readable file");
    }
    std::vector<double> values;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const std::string cell = trim(line.substr(line.find_last_of(',') == std::string::npos
                                                      ? 0
                                                      : line.find_last_of(',') + 1));
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(cell, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != cell.size()) {
            if (first) {
                first = false;
                continue;
            }
            throw ParameterError("field file: '" + cell + "' is not a number");
        }
        first = false;
        values.push_back(v);
    }
    if (static_cast<Eigen::Index>(values.size()) != torus.size()) {
        throw ShapeError("field file holds " + std::to_string(values.size()) +
                         " samples, the grid needs " + std::to_string(torus.size()));
    }
    return {torus, Eigen::Map<Eigen::ArrayXd>(values.data(), values.size())};
}

GridField make_field(const FieldSpec& spec, const TorusSpec& torus) {
    if (spec.field == "sin1") {
        return sample_grid(torus, [](const Eigen::VectorXd& x) { return std::sin(x[0]); });
    }
    if (spec.field == "gauss-meanzero") {
        const double length = spec.length;
        GridField g = sample_grid(torus, [length](const Eigen::VectorXd& x) {
            double r2 = 0.0;
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                const double s = std::sin(std::numbers::pi * x[i] / length - 0.5 * std::numbers::pi);
                r2 += s * s;
            }
            return std::exp(-r2 / 0.0625);
        });
        g.samples -= g.samples.mean();
        return g;
    }
    return read_grid_csv(torus, spec.field);
}

void add_field_options(CLI::App* sub, FieldSpec& spec) {
    sub->add_option("--field", spec.field, "sin1, gauss-meanzero, or a CSV grid file");
    sub->add_option("--n", spec.n, "Dimension");
    add_number(sub, "--l", spec.length, "Torus side length");
    sub->add_option("--N", spec.grid, "Grid points per axis (0: 64, or 32 for n = 3)");
}

// Reruns a study at twice the resolution and records how far the errors moved.
void refinement_check(StudyReport& report, const StudyReport& fine) {
    double change = 0.0;
    for (std::size_t r = 0; r < report.rows.size(); ++r) {
        const double coarse = report.number(r, "error");
        const double refined = fine.number(r, "error");
        if (coarse > 0.0) {
            change = std::max(change, std::abs(refined - coarse) / coarse);
        }
    }
    report.add_meta("refinement_max_relative_change", change);
    report.check(report.passed() == fine.passed(), "conclusions change when the grid is doubled");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> tokens;
    try {
        tokens = prepare_tokens(args);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    CLI::App app{"Fourier multipliers of the nonlocal Laplacian", "nlap"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default()->multi_option_policy(
        CLI::MultiOptionPolicy::TakeLast);

    std::string out_path;
    std::string format = "csv";
    bool no_timestamp = false;
    EvalPolicy policy;
    app.add_option("--out", out_path, "Write the table here instead of stdout");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--no-timestamp", no_timestamp, "Omit the generation timestamp line");
    add_number(&app, "--rel-tol", policy.rel_tol, "Series relative tolerance");
    app.add_option("--max-terms", policy.max_terms, "Series term budget");
    add_number(&app, "--large-arg-threshold", policy.large_arg_threshold,
                   "Largest (|nu| delta/2)^2 summed as a power series");
    add_number(&app, "--quadrature-arg-limit", policy.quadrature_arg_limit,
                   "Largest |nu| delta/2 evaluated by the integral route");
    add_number(&app, "--quadrature-rel-tol", policy.quadrature_rel_tol,
                   "Relative target of the integral route");

    std::function<StudyReport()> action;

    // multiplier
    int m_n = 1;
    double m_delta = 0.1;
    std::string m_beta = "1";
    std::string m_nu = "1";
    CLI::App* cmd_multiplier = app.add_subcommand("multiplier", "Evaluate m(|nu|)")->fallthrough();
    cmd_multiplier->add_option("--n", m_n, "Dimension");
    add_number(cmd_multiplier, "--delta", m_delta, "Horizon");
    cmd_multiplier->add_option("--beta", m_beta, "Kernel exponent (number or -inf)");
    cmd_multiplier->add_option("--nu", m_nu, "Comma-separated |nu| values");
    cmd_multiplier->callback([&] {
        action = [&] {
            const KernelParams params(m_n, m_delta, parse_beta(m_beta));
            params.validate();
            StudyReport report;
            report.name = "multiplier";
            report.columns = {"nu_norm", "value", "method", "est_error"};
            for (double nu : parse_list(m_nu, "nu")) {
                const MultiplierResult m = multiplier(params, nu, policy);
                report.add_row({nu, m.value, std::string(to_string(m.method)), m.est_error});
            }
            return report;
        };
    });

    // sweep
    std::string s_n = "1";
    double s_delta = 0.1;
    std::string s_beta = "1";
    SweepSpec sweep;
    std::string s_spacing = "linear";
    std::string s_outputs = "multiplier,asymptote_large";
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "Multiplier curves on a |nu| grid")->fallthrough();
    cmd_sweep->add_option("--n", s_n, "Comma-separated dimensions");
    add_number(cmd_sweep, "--delta", s_delta, "Horizon");
    cmd_sweep->add_option("--beta", s_beta, "Comma-separated kernel exponents (numbers or -inf)");
    add_number(cmd_sweep, "--nu-min", sweep.nu_min, "Smallest |nu|");
    add_number(cmd_sweep, "--nu-max", sweep.nu_max, "Largest |nu|");
    cmd_sweep->add_option("--count", sweep.count, "Grid points");
    cmd_sweep->add_option("--spacing", s_spacing, "linear or log")
        ->check(CLI::IsMember({"linear", "log"}));
    cmd_sweep->add_option("--outputs", s_outputs,
                          "Comma-separated: multiplier, asymptote_large, asymptote_small, "
                          "limit_neg_inf, oracle");
    cmd_sweep->callback([&] {
        action = [&] {
            sweep.params.clear();
            for (double n : parse_list(s_n, "n")) {
                if (n != std::floor(n)) {
                    throw ParameterError("n must be an integer");
                }
                for (const std::string& b : split_names(s_beta)) {
                    sweep.params.emplace_back(static_cast<int>(n), s_delta, parse_beta(b));
                }
            }
            sweep.spacing = s_spacing == "log" ? Spacing::Log : Spacing::Linear;
            sweep.outputs.clear();
            for (const std::string& name : split_names(s_outputs)) {
                if (name == "multiplier") {
                    sweep.outputs.push_back(SweepOutput::Multiplier);
                } else if (name == "asymptote_large") {
                    sweep.outputs.push_back(SweepOutput::AsymptoteLarge);
                } else if (name == "asymptote_small") {
                    sweep.outputs.push_back(SweepOutput::AsymptoteSmall);
                } else if (name == "limit_neg_inf") {
                    sweep.outputs.push_back(SweepOutput::LimitNegInf);
                } else if (name == "oracle") {
                    sweep.outputs.push_back(SweepOutput::Oracle);
                } else {
                    throw ParameterError("outputs: unknown curve '" + name + "'");
                }
            }
            sweep.policy = policy;
            return figure_multiplier_sweep(sweep);
        };
    });

    // solve
    FieldSpec solve_field;
    double solve_delta = 0.1;
    std::string solve_beta = "1";
    bool solve_local = false;
    CLI::App* cmd_solve = app.add_subcommand("solve", "Solve L u = f on the torus")->fallthrough();
    add_field_options(cmd_solve, solve_field);
    add_number(cmd_solve, "--delta", solve_delta, "Horizon");
    cmd_solve->add_option("--beta", solve_beta, "Kernel exponent (number or -inf)");
    cmd_solve->add_flag("--local", solve_local, "Solve with the local Laplacian instead");
    cmd_solve->callback([&] {
        action = [&] {
            const TorusSpec torus = solve_field.torus(solve_field.grid);
            torus.validate();
            const KernelParams params = solve_local
                                            ? KernelParams(solve_field.n, 1.0, solve_field.n + 2.0)
                                            : KernelParams(solve_field.n, solve_delta,
                                                           parse_beta(solve_beta));
            params.validate();
            const GridField f = make_field(solve_field, torus);
            const SpectralField f_hat = forward_transform(f);
            const Eigen::ArrayXd eig = eigenvalue_array(torus, params, policy);
            const SpectralField u_hat = solve_poisson(f_hat, eig);
            const GridField u = inverse_transform(u_hat);
            const GridField lu = inverse_transform(apply_operator_spectral(u_hat, eig));
            const Eigen::MatrixXd x = grid_points(torus);

            StudyReport report;
            report.name = "solve";
            for (int i = 0; i < torus.n; ++i) {
                report.columns.push_back("x" + std::to_string(i));
            }
            report.columns.insert(report.columns.end(), {"f", "u"});
            for (Eigen::Index c = 0; c < x.cols(); ++c) {
                std::vector<Cell> row;
                for (int i = 0; i < torus.n; ++i) {
                    row.push_back(x(i, c));
                }
                row.push_back(f.samples[c]);
                row.push_back(u.samples[c]);
                report.add_row(std::move(row));
            }
            report.add_meta("operator", solve_local ? std::string("local")
                                                    : "nonlocal beta=" + params.beta.to_string());
            report.add_meta("N", static_cast<double>(torus.grid_sizes[0]));
            report.add_meta("residual_max_abs", (lu.samples - f.samples).abs().maxCoeff());
            return report;
        };
    });

    // study-delta
    FieldSpec sd_field;
    double sd_beta = 1.0;
    std::string sd_deltas = "0.4,0.2,0.1,0.05";
    double sd_s = 0.0;
    CLI::App* cmd_study_delta =
        app.add_subcommand("study-delta", "Convergence of solutions as delta -> 0")->fallthrough();
    add_field_options(cmd_study_delta, sd_field);
    add_number(cmd_study_delta, "--beta", sd_beta, "Kernel exponent");
    cmd_study_delta->add_option("--deltas", sd_deltas, "Comma-separated delta ladder");
    add_number(cmd_study_delta, "--s", sd_s, "Sobolev index of f");
    cmd_study_delta->callback([&] {
        action = [&] {
            const std::vector<double> ladder = parse_list(sd_deltas, "deltas");
            auto run = [&](int grid) {
                const TorusSpec torus = sd_field.torus(grid);
                StudyReport r = convergence_study_delta(torus, sd_beta, make_field(sd_field, torus),
                                                        ladder, sd_s, policy);
                for (std::size_t i = 1; i < r.rows.size(); ++i) {
                    r.check(r.number(i, "error") <= r.number(i - 1, "error"),
                            "error grows along the delta ladder");
                }
                return r;
            };
            const int grid = sd_field.torus(sd_field.grid).grid_sizes[0];
            StudyReport report = run(grid);
            report.add_meta("N", static_cast<double>(grid));
            if (sd_field.is_named()) {
                refinement_check(report, run(2 * grid));
            }
            return report;
        };
    });

    // study-beta
    FieldSpec sb_field;
    double sb_delta = 0.5;
    double sb_epsilon = 0.5;
    std::string sb_betas = "2,2.5,2.9,2.99";
    double sb_s = 0.0;
    CLI::App* cmd_study_beta =
        app.add_subcommand("study-beta", "Convergence of solutions as beta -> n+2")->fallthrough();
    add_field_options(cmd_study_beta, sb_field);
    add_number(cmd_study_beta, "--delta", sb_delta, "Horizon");
    add_number(cmd_study_beta, "--epsilon", sb_epsilon, "Regularity loss epsilon in (0, 2)");
    cmd_study_beta->add_option("--betas", sb_betas, "Comma-separated beta ladder in (n, n+2]");
    add_number(cmd_study_beta, "--s", sb_s, "Sobolev index of f");
    cmd_study_beta->callback([&] {
        action = [&] {
            const std::vector<double> ladder = parse_list(sb_betas, "betas");
            auto run = [&](int grid) {
                const TorusSpec torus = sb_field.torus(grid);
                return convergence_study_beta(torus, sb_delta, make_field(sb_field, torus), ladder,
                                              sb_epsilon, sb_s, policy);
            };
            const int grid = sb_field.torus(sb_field.grid).grid_sizes[0];
            StudyReport report = run(grid);
            report.add_meta("N", static_cast<double>(grid));
            if (sb_field.is_named()) {
                refinement_check(report, run(2 * grid));
            }
            return report;
        };
    });

    // neginf
    int ni_n = 2;
    double ni_delta = 0.1;
    std::string ni_betas = "-100,-500";
    double ni_nu_min = 1.0;
    double ni_nu_max = 318.0 * std::numbers::pi;
    int ni_count = 1000;
    CLI::App* cmd_neginf =
        app.add_subcommand("neginf", "Approach of the multipliers to the beta = -inf limit")
            ->fallthrough();
    cmd_neginf->add_option("--n", ni_n, "Dimension");
    add_number(cmd_neginf, "--delta", ni_delta, "Horizon");
    cmd_neginf->add_option("--betas", ni_betas, "Comma-separated exponents <= -10");
    add_number(cmd_neginf, "--nu-min", ni_nu_min, "Smallest |nu|");
    add_number(cmd_neginf, "--nu-max", ni_nu_max, "Largest |nu|");
    cmd_neginf->add_option("--count", ni_count, "Grid points");
    cmd_neginf->callback([&] {
        action = [&] {
            if (ni_count < 2 || !(ni_nu_min > 0.0 && ni_nu_min < ni_nu_max)) {
                throw ParameterError("neginf: need count >= 2 and 0 < nu-min < nu-max");
            }
            const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(ni_count, ni_nu_min, ni_nu_max);
            return neg_inf_limit_study(ni_n, ni_delta, parse_list(ni_betas, "betas"),
                                       std::vector<double>(grid.begin(), grid.end()), policy);
        };
    });

    try {
        std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    try {
        policy.validate();
        const StudyReport report = action();

        std::vector<std::string> preamble;
        if (!no_timestamp) {
            preamble.push_back("generated: " + utc_timestamp());
        }
        preamble.push_back(resolved_config(app, *chosen));

        std::ofstream file;
        if (!out_path.empty()) {
            file.open(out_path);
            if (!file) {
                err << "error: cannot write '" << out_path << "'\n";
                return kExitRuntime;
            }
        }
        std::ostream& sink = out_path.empty() ? out : file;
        sink.precision(17);
        if (format == "json") {
            write_json(sink, report, preamble);
        } else {
            write_csv(sink, report, preamble);
        }
        if (!report.passed()) {
            for (const std::string& failure : report.failed_assertions) {
                err << "assertion failed: " << failure << '\n';
            }
            return kExitStudyFailed;
        }
        return kExitOk;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ShapeError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const CompatibilityError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace nlap
