#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "specrank/io.hpp"

namespace {

using namespace specrank;

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file '" + path + "'");
    }
    out << content;
}

struct ExperimentArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> replications;
    int threads = 0;  // 0 = auto; flag beats SPECRANK_THREADS beats auto
    std::optional<std::string> format;
    std::optional<std::string> out_path;
    std::string dump_path;
};

int run_experiment_command(const ExperimentArgs& args) {
    RunConfig config;
    if (!args.config_path.empty()) {
        config = load_run_config(args.config_path);
    }
    if (args.seed) config.experiment.master_seed = *args.seed;
    if (args.replications) config.experiment.replications = *args.replications;
    if (args.format) config.format = parse_output_format(*args.format);
    if (args.out_path) config.out_path = *args.out_path;
    config.experiment.validate();

    if (!args.dump_path.empty()) {
        write_output(args.dump_path, dump_run_config(config));
        return 0;
    }

    const SummaryTable table = run_experiment(config.experiment, args.threads);
    std::string rendered;
    switch (config.format) {
        case OutputFormat::Table:
            rendered = render_table(table, config.experiment);
            break;
        case OutputFormat::Csv: rendered = render_csv(table); break;
        case OutputFormat::JsonLines: rendered = render_json_lines(table); break;
    }
    write_output(config.out_path, rendered);

    for (const SummaryRow& row : table.rows) {
        if (row.failures > 0) {
            std::cerr << "warning: " << row.failures
                      << " replication(s) failed in cell " << to_string(row.estimator)
                      << "/" << to_string(row.scenario) << "\n";
            return 1;
        }
    }
    return 0;
}

struct CurvesArgs {
    double sigma = 1.0;
    double x_min = 0.1, x_max = 4.0, x_step = 0.05;
    double gamma_min = 2.0, gamma_max = 8.0, gamma_step = 0.1;
    std::string out_path = "-";
};

int run_curves_command(const CurvesArgs& args) {
    write_output(args.out_path,
                 render_curves(args.sigma, args.x_min, args.x_max, args.x_step,
                               args.gamma_min, args.gamma_max, args.gamma_step));
    return 0;
}

struct EstimateArgs {
    std::string matrix_path;
    std::string estimator = "aic";
    std::string scenario = "S1";
    int q = -1;  // -1 = min(20, n - 1)
    std::optional<double> sigma2;
    double gamma = 2.15;
    double delta_coefficient = 0.1;
    double soft_b = 5.0;
    double alpha = 0.1;
};

int run_estimate_command(const EstimateArgs& args) {
    const Estimator estimator = parse_estimator(args.estimator);
    const Scenario scenario = parse_scenario(args.scenario);
    if (estimator == Estimator::Scree && scenario == Scenario::S4) {
        throw ConfigError("scree is not defined for scenario S4");
    }

    const Eigen::MatrixXd x = load_matrix(args.matrix_path);
    const Spectrum spectrum = eigenvalues_desc(x);
    const int n = spectrum.n();
    const int q = args.q >= 0 ? args.q : std::min(20, n - 1);
    if (q >= n) {
        throw ConfigError("q must satisfy q < n (matrix dimension " +
                          std::to_string(n) + ")");
    }

    double sigma2_plug = 0.0;
    if (scenario == Scenario::S1) {
        if (!args.sigma2) {
            throw ConfigError("scenario S1 requires --sigma2 (oracle noise level)");
        }
        sigma2_plug = *args.sigma2;
    } else if (scenario == Scenario::S2) {
        sigma2_plug = sigma2_naive(spectrum);
    } else if (scenario == Scenario::S3) {
        sigma2_plug = sigma2_trimmed(spectrum, args.alpha);
    }

    std::ostringstream out;
    out << "n = " << n << ", q = " << q << ", estimator = " << to_string(estimator)
        << ", scenario = " << to_string(scenario) << "\n";
    if (scenario != Scenario::S4) {
        char buffer[64];
        std::snprintf(buffer, sizeof(buffer), "%.10g", sigma2_plug);
        out << "sigma2 = " << buffer << "\n";
    }

    int selected = 0;
    char line[96];
    if (estimator == Estimator::Scree) {
        const double sigma_hat = std::sqrt(sigma2_plug);
        selected = scree(spectrum, q, sigma_hat);
        out << "j  eigenvalue/(2*sigma_hat)\n";
        for (int j = 1; j <= q; ++j) {
            std::snprintf(line, sizeof(line), "%-3d %.10g\n", j,
                          spectrum.values[j - 1] / (2.0 * sigma_hat));
            out << line;
        }
    } else {
        double gamma = args.gamma;
        if (estimator == Estimator::Aic || estimator == Estimator::Saic) gamma = 2.0;
        if (estimator == Estimator::GaicDelta) {
            gamma = 2.0 + args.delta_coefficient / std::sqrt(static_cast<double>(n));
        }
        const ScoreVector scores =
            scenario == Scenario::S4
                ? gaic_scores_unknown_sigma(spectrum, gamma, q)
                : gaic_scores_known_sigma(spectrum, gamma, sigma2_plug, q);
        if (estimator == Estimator::Saic) {
            const double threshold_sigma2 =
                scenario == Scenario::S4 ? sigma2_naive(spectrum) : sigma2_plug;
            selected = soft_aic(spectrum, q, args.soft_b, threshold_sigma2,
                                scenario == Scenario::S4 ? SigmaMode::Unknown
                                                         : SigmaMode::Known);
        } else {
            selected = select_min(scores);
        }
        out << "j  score (gamma = " << gamma << ")\n";
        for (int j = 0; j <= q; ++j) {
            std::snprintf(line, sizeof(line), "%-3d %.10g\n", j, scores.scores[j]);
            out << line;
        }
    }
    out << "selected k = " << selected << "\n";
    std::cout << out.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rank selection for spiked symmetric matrices"};
    app.require_subcommand(1);

    ExperimentArgs experiment;
    CLI::App* exp_cmd = app.add_subcommand(
        "experiment", "run a Monte Carlo selection experiment and print a table");
    exp_cmd->add_option("--config", experiment.config_path,
                        "experiment config file (defaults apply when omitted)");
    exp_cmd->add_option("--seed", experiment.seed, "override run.master_seed");
    exp_cmd->add_option("--replications", experiment.replications,
                        "override run.replications");
    exp_cmd->add_option("--threads", experiment.threads,
                        "worker threads (0 = all cores)")
        ->envname("SPECRANK_THREADS");
    exp_cmd->add_option("--format", experiment.format,
                        "output format: table, csv or json-lines");
    exp_cmd->add_option("--out", experiment.out_path, "output path ('-' = stdout)");
    exp_cmd->add_option("--dump-config", experiment.dump_path,
                        "write the effective config to this path and exit");

    CurvesArgs curves;
    CLI::App* curves_cmd = app.add_subcommand(
        "curves", "emit psi and lambda_gamma sample points as CSV");
    curves_cmd->add_option("--sigma", curves.sigma, "noise level sigma");
    curves_cmd->add_option("--x-min", curves.x_min, "psi curve start (> 0)");
    curves_cmd->add_option("--x-max", curves.x_max, "psi curve end");
    curves_cmd->add_option("--x-step", curves.x_step, "psi curve step");
    curves_cmd->add_option("--gamma-min", curves.gamma_min,
                           "lambda_gamma curve start (>= 2)");
    curves_cmd->add_option("--gamma-max", curves.gamma_max, "lambda_gamma curve end");
    curves_cmd->add_option("--gamma-step", curves.gamma_step,
                           "lambda_gamma curve step");
    curves_cmd->add_option("--out", curves.out_path, "output path ('-' = stdout)");

    EstimateArgs estimate;
    CLI::App* est_cmd = app.add_subcommand(
        "estimate", "select the rank of one matrix loaded from a file");
    est_cmd->add_option("--matrix", estimate.matrix_path, "matrix file")->required();
    est_cmd->add_option("--estimator", estimate.estimator,
                        "aic, gaic-delta, saic, gaic-gamma or scree");
    est_cmd->add_option("--scenario", estimate.scenario, "S1, S2, S3 or S4");
    est_cmd->add_option("--q", estimate.q, "candidate ranks 0..q (default min(20, n-1))");
    est_cmd->add_option("--sigma2", estimate.sigma2, "oracle sigma^2 for S1");
    est_cmd->add_option("--gamma", estimate.gamma, "penalty for gaic-gamma");
    est_cmd->add_option("--delta-coefficient", estimate.delta_coefficient,
                        "delta_n = coefficient / sqrt(n) for gaic-delta");
    est_cmd->add_option("--soft-b", estimate.soft_b, "soft-AIC bound B");
    est_cmd->add_option("--alpha", estimate.alpha, "trim fraction for S3");

    CLI11_PARSE(app, argc, argv);

    try {
        if (exp_cmd->parsed()) return run_experiment_command(experiment);
        if (curves_cmd->parsed()) return run_curves_command(curves);
        if (est_cmd->parsed()) return run_estimate_command(estimate);
    } catch (const specrank::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
