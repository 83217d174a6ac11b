#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include "specrank/montecarlo.hpp"

namespace specrank {

enum class OutputFormat { Table, Csv, JsonLines };

/// Experiment config plus output routing, mirroring the config file.
struct RunConfig {
    ExperimentConfig experiment;
    OutputFormat format = OutputFormat::Table;
    std::string out_path = "-";  // "-" = stdout
};

/// Parse the sectioned key = value config format. Unknown sections or keys,
/// duplicates, malformed numbers, and out-of-range values all raise
/// ConfigError naming the offending key.
RunConfig parse_run_config(std::istream& in, const std::string& source_name);
RunConfig load_run_config(const std::string& path);

/// Serialize a RunConfig in the same format parse_run_config reads.
/// Round-trips to an identical config (floats use shortest exact form).
std::string dump_run_config(const RunConfig& config);

/// Matrix file format: first line n, then n rows of n space-separated
/// decimals. Symmetry is verified on load (1e-10 entrywise).
Eigen::MatrixXd read_matrix(std::istream& in, const std::string& source_name);
Eigen::MatrixXd load_matrix(const std::string& path);
void write_matrix(std::ostream& out, const Eigen::MatrixXd& x);

/// Renderers for the summary table. Csv and JsonLines print floats with six
/// significant digits so repeated runs are byte-identical; non-finite cells
/// (all replications failed) render as NA / null.
std::string render_csv(const SummaryTable& table);
std::string render_json_lines(const SummaryTable& table);
std::string render_table(const SummaryTable& table, const ExperimentConfig& config);

/// Sample points of psi_sigma over [x_min, x_max] and of lambda_gamma over
/// [gamma_min, gamma_max] as "curve,x,value" CSV rows.
std::string render_curves(double sigma, double x_min, double x_max, double x_step,
                          double gamma_min, double gamma_max, double gamma_step);

const char* to_string(OutputFormat format);
OutputFormat parse_output_format(const std::string& token);

}  // namespace specrank
