#include "specrank/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace specrank {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> tokens;
    std::istringstream in(s);
    std::string token;
    while (in >> token) tokens.push_back(token);
    return tokens;
}

double parse_double_value(const std::string& key, const std::string& value) {
    double parsed = 0.0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, parsed);
    if (ec != std::errc() || ptr != last) {
        throw ConfigError("key '" + key + "': malformed number '" + value + "'");
    }
    return parsed;
}

long long parse_int_value(const std::string& key, const std::string& value) {
    long long parsed = 0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, parsed);
    if (ec != std::errc() || ptr != last) {
        throw ConfigError("key '" + key + "': malformed integer '" + value + "'");
    }
    return parsed;
}

std::uint64_t parse_u64_value(const std::string& key, const std::string& value) {
    std::uint64_t parsed = 0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, parsed);
    if (ec != std::errc() || ptr != last) {
        throw ConfigError("key '" + key + "': malformed unsigned integer '" + value +
                          "'");
    }
    return parsed;
}

// Shortest decimal form that parses back to the same double.
std::string exact_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

std::string six_digits(double value) {
    if (!std::isfinite(value)) return "NA";
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

std::string json_number(double value) {
    if (!std::isfinite(value)) return "null";
    return six_digits(value);
}

void apply_key(RunConfig& config, const std::string& key, const std::string& value) {
    ExperimentConfig& exp = config.experiment;
    if (key == "model.lambdas") {
        exp.spikes.lambdas.clear();
        for (const auto& token : split_tokens(value)) {
            exp.spikes.lambdas.push_back(parse_double_value(key, token));
        }
    } else if (key == "model.sigma") {
        exp.spikes.sigma = parse_double_value(key, value);
    } else if (key == "noise.profile") {
        try {
            exp.profile = parse_noise_profile(value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("key '" + key + "': " + e.what());
        }
    } else if (key == "noise.n") {
        exp.n = static_cast<int>(parse_int_value(key, value));
    } else if (key == "selection.q") {
        exp.q = static_cast<int>(parse_int_value(key, value));
    } else if (key == "selection.gamma") {
        exp.gamma = parse_double_value(key, value);
    } else if (key == "selection.delta_coefficient") {
        exp.delta_coefficient = parse_double_value(key, value);
    } else if (key == "selection.soft_b") {
        exp.soft_b = parse_double_value(key, value);
    } else if (key == "selection.alpha") {
        exp.alpha = parse_double_value(key, value);
    } else if (key == "run.scenarios") {
        exp.scenarios.clear();
        for (const auto& token : split_tokens(value)) {
            exp.scenarios.push_back(parse_scenario(token));
        }
    } else if (key == "run.estimators") {
        exp.estimators.clear();
        for (const auto& token : split_tokens(value)) {
            exp.estimators.push_back(parse_estimator(token));
        }
    } else if (key == "run.replications") {
        exp.replications = static_cast<int>(parse_int_value(key, value));
    } else if (key == "run.master_seed") {
        exp.master_seed = parse_u64_value(key, value);
    } else if (key == "output.format") {
        config.format = parse_output_format(value);
    } else if (key == "output.path") {
        config.out_path = value;
    } else {
        throw ConfigError("unknown key '" + key + "'");
    }
}

bool known_section(const std::string& section) {
    return section == "model" || section == "noise" || section == "selection" ||
           section == "run" || section == "output";
}

}  // namespace

RunConfig parse_run_config(std::istream& in, const std::string& source_name) {
    RunConfig config;
    std::string section;
    std::set<std::string> seen;
    std::string line;
    int line_number = 0;

    while (std::getline(in, line)) {
        ++line_number;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;

        const std::string where =
            source_name + ":" + std::to_string(line_number) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(where + "unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (!known_section(section)) {
                throw ConfigError(where + "unknown section '[" + section + "]'");
            }
            continue;
        }

        const auto equals = line.find('=');
        if (equals == std::string::npos) {
            throw ConfigError(where + "expected 'key = value'");
        }
        if (section.empty()) {
            throw ConfigError(where + "key outside of any section");
        }
        const std::string key = section + "." + trim(line.substr(0, equals));
        const std::string value = trim(line.substr(equals + 1));
        if (!seen.insert(key).second) {
            throw ConfigError(where + "duplicate key '" + key + "'");
        }
        try {
            apply_key(config, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }

    try {
        config.experiment.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(source_name + ": " + e.what());
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    return parse_run_config(in, path);
}

std::string dump_run_config(const RunConfig& config) {
    const ExperimentConfig& exp = config.experiment;
    std::ostringstream out;
    out << "[model]\n";
    out << "lambdas =";
    for (const double lambda : exp.spikes.lambdas) out << ' ' << exact_double(lambda);
    out << '\n';
    out << "sigma = " << exact_double(exp.spikes.sigma) << '\n';
    out << '\n';
    out << "[noise]\n";
    out << "profile = " << to_string(exp.profile) << '\n';
    out << "n = " << exp.n << '\n';
    out << '\n';
    out << "[selection]\n";
    out << "q = " << exp.q << '\n';
    out << "gamma = " << exact_double(exp.gamma) << '\n';
    out << "delta_coefficient = " << exact_double(exp.delta_coefficient) << '\n';
    out << "soft_b = " << exact_double(exp.soft_b) << '\n';
    out << "alpha = " << exact_double(exp.alpha) << '\n';
    out << '\n';
    out << "[run]\n";
    out << "scenarios =";
    for (const Scenario scenario : exp.scenarios) out << ' ' << to_string(scenario);
    out << '\n';
    out << "estimators =";
    for (const Estimator estimator : exp.estimators) {
        out << ' ' << to_string(estimator);
    }
    out << '\n';
    out << "replications = " << exp.replications << '\n';
    out << "master_seed = " << exp.master_seed << '\n';
    out << '\n';
    out << "[output]\n";
    out << "format = " << to_string(config.format) << '\n';
    out << "path = " << config.out_path << '\n';
    return out.str();
}

Eigen::MatrixXd read_matrix(std::istream& in, const std::string& source_name) {
    long long n = 0;
    if (!(in >> n) || n < 1) {
        throw std::runtime_error("matrix file '" + source_name +
                                 "': first token must be a positive dimension");
    }
    Eigen::MatrixXd x(n, n);
    for (long long i = 0; i < n; ++i) {
        for (long long j = 0; j < n; ++j) {
            if (!(in >> x(i, j))) {
                throw std::runtime_error("matrix file '" + source_name +
                                         "': expected " + std::to_string(n * n) +
                                         " entries");
            }
        }
    }
    for (long long i = 0; i < n; ++i) {
        for (long long j = i + 1; j < n; ++j) {
            if (std::abs(x(i, j) - x(j, i)) > 1e-10) {
                throw std::runtime_error(
                    "matrix file '" + source_name + "': not symmetric at (" +
                    std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")");
            }
        }
    }
    return x;
}

Eigen::MatrixXd load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open matrix file '" + path + "'");
    }
    return read_matrix(in, path);
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& x) {
    out << x.rows() << '\n';
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            if (j > 0) out << ' ';
            out << exact_double(x(i, j));
        }
        out << '\n';
    }
}

std::string render_csv(const SummaryTable& table) {
    std::ostringstream out;
    out << "estimator,scenario,mean,sd,pcs,pcs_se,failures\n";
    for (const SummaryRow& row : table.rows) {
        out << to_string(row.estimator) << ',' << to_string(row.scenario) << ','
            << six_digits(row.mean) << ',' << six_digits(row.sd) << ','
            << six_digits(row.pcs) << ',' << six_digits(row.pcs_se) << ','
            << row.failures << '\n';
    }
    return out.str();
}

std::string render_json_lines(const SummaryTable& table) {
    std::ostringstream out;
    for (const SummaryRow& row : table.rows) {
        out << "{\"estimator\":\"" << to_string(row.estimator)
            << "\",\"scenario\":\"" << to_string(row.scenario)
            << "\",\"mean\":" << json_number(row.mean)
            << ",\"sd\":" << json_number(row.sd)
            << ",\"pcs\":" << json_number(row.pcs)
            << ",\"pcs_se\":" << json_number(row.pcs_se)
            << ",\"failures\":" << row.failures << "}\n";
    }
    return out.str();
}

std::string render_table(const SummaryTable& table, const ExperimentConfig& config) {
    char line[160];
    std::ostringstream out;
    out << "rank selection experiment: profile=" << to_string(config.profile)
        << " n=" << config.n << " q=" << config.q
        << " replications=" << table.replications
        << " seed=" << config.master_seed << '\n';
    out << "true k = " << table.true_k << ", sigma2 = " << six_digits(table.sigma2)
        << ", gamma = " << six_digits(table.gamma)
        << ", delta_N = " << six_digits(table.delta_n) << '\n';
    if (std::isfinite(table.lambda_gamma) ||
        std::isfinite(table.lambda_gamma_delta)) {
        bool first = true;
        if (std::isfinite(table.lambda_gamma)) {
            std::snprintf(line, sizeof(line), "lambda_gamma = %.2f",
                          table.lambda_gamma);
            out << line;
            first = false;
        }
        if (std::isfinite(table.lambda_gamma_delta)) {
            std::snprintf(line, sizeof(line), "lambda_2+delta = %.2f",
                          table.lambda_gamma_delta);
            out << (first ? "" : ", ") << line;
        }
        out << '\n';
    }
    out << '\n';
    std::snprintf(line, sizeof(line), "%-12s %-9s %9s %9s %9s %9s %9s\n",
                  "estimator", "scenario", "mean", "sd", "pcs", "pcs_se",
                  "failures");
    out << line;
    for (const SummaryRow& row : table.rows) {
        std::snprintf(line, sizeof(line), "%-12s %-9s %9s %9s %9s %9s %9d\n",
                      to_string(row.estimator), to_string(row.scenario),
                      six_digits(row.mean).c_str(), six_digits(row.sd).c_str(),
                      six_digits(row.pcs).c_str(), six_digits(row.pcs_se).c_str(),
                      row.failures);
        out << line;
    }
    return out.str();
}

std::string render_curves(double sigma, double x_min, double x_max, double x_step,
                          double gamma_min, double gamma_max, double gamma_step) {
    if (!(sigma > 0.0)) {
        throw std::domain_error("curves require sigma > 0");
    }
    if (!(x_min > 0.0) || !(x_step > 0.0) || x_max < x_min) {
        throw std::domain_error("curves require 0 < x_min <= x_max and x_step > 0");
    }
    if (!(gamma_min >= 2.0) || !(gamma_step > 0.0) || gamma_max < gamma_min) {
        throw std::domain_error(
            "curves require 2 <= gamma_min <= gamma_max and gamma_step > 0 "
            "(lambda_gamma is defined for gamma >= 2)");
    }
    std::ostringstream out;
    out << "curve,x,value\n";
    const auto steps = [](double lo, double hi, double step) {
        return static_cast<int>(std::floor((hi - lo) / step + 1e-9));
    };
    for (int i = 0, count = steps(x_min, x_max, x_step); i <= count; ++i) {
        const double x = x_min + i * x_step;
        out << "psi," << six_digits(x) << ',' << six_digits(psi(sigma, x)) << '\n';
    }
    for (int i = 0, count = steps(gamma_min, gamma_max, gamma_step); i <= count; ++i) {
        const double gamma = gamma_min + i * gamma_step;
        out << "lambda_gamma," << six_digits(gamma) << ','
            << six_digits(lambda_threshold(sigma, gamma)) << '\n';
    }
    return out.str();
}

const char* to_string(OutputFormat format) {
    switch (format) {
        case OutputFormat::Table: return "table";
        case OutputFormat::Csv: return "csv";
        case OutputFormat::JsonLines: return "json-lines";
    }
    return "?";
}

OutputFormat parse_output_format(const std::string& token) {
    if (token == "table") return OutputFormat::Table;
    if (token == "csv") return OutputFormat::Csv;
    if (token == "json-lines") return OutputFormat::JsonLines;
    throw ConfigError("unknown output format '" + token +
                      "' (expected table, csv or json-lines)");
}

}  // namespace specrank
