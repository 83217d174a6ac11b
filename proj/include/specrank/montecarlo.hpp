#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "specrank/criteria.hpp"
#include "specrank/ensembles.hpp"

namespace specrank {

/// Invalid experiment or run configuration. The message names the offending
/// field so the CLI can surface it directly.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// How sigma enters the scores in a given run:
///   S1 oracle sigma^2, S2 full-spectrum estimate, S3 trimmed estimate,
///   S4 unknown-sigma scores (per-model MLE).
enum class Scenario { S1, S2, S3, S4 };

enum class Estimator {
    Aic,        // penalty 2
    GaicDelta,  // penalty 2 + delta_n, delta_n = delta_coefficient / sqrt(n)
    Saic,       // soft minimizer of AIC
    GaicGamma,  // penalty gamma (fixed, > 2 in the consistent regime)
    Scree,      // count of eigenvalues above 2 * sigma_hat
};

struct ExperimentConfig {
    SpikeConfig spikes{{10.0, 3.0, 1.5, 1.5}, 1.0};
    NoiseProfile profile = NoiseProfile::Goe;
    int n = 1000;
    int q = 20;
    double gamma = 2.15;
    double delta_coefficient = 0.1;  // delta_n = coefficient / sqrt(n)
    double soft_b = 5.0;             // a-priori bound B for the soft-AIC threshold
    double alpha = 0.1;              // trimming fraction for sigma2_trimmed
    std::vector<Scenario> scenarios = {Scenario::S1, Scenario::S2, Scenario::S3,
                                       Scenario::S4};
    std::vector<Estimator> estimators = {Estimator::Aic, Estimator::GaicDelta,
                                         Estimator::Saic, Estimator::GaicGamma,
                                         Estimator::Scree};
    int replications = 100;
    std::uint64_t master_seed = 20240801;

    double delta_n() const;
    void validate() const;  // throws ConfigError naming the bad field
};

/// One (estimator, scenario) cell of the result table.
struct CellSpec {
    Estimator estimator;
    Scenario scenario;

    bool operator==(const CellSpec&) const = default;
};

/// The evaluated cells, in deterministic (estimator-major) config order.
/// The scree estimator is never paired with S4; that combination is skipped.
std::vector<CellSpec> experiment_cells(const ExperimentConfig& config);

/// One Monte Carlo draw: sample X from substream (master_seed, index), run
/// the eigensolver once, and evaluate every cell from that single spectrum.
/// Entries align with experiment_cells(config); a cell that throws is
/// recorded as nullopt instead of aborting the batch.
std::vector<std::optional<int>> run_replication(const ExperimentConfig& config,
                                                int index);

struct SummaryRow {
    Estimator estimator;
    Scenario scenario;
    double mean = 0.0;    // average selected rank over successful replications
    double sd = 0.0;      // sample standard deviation (denominator R - 1; 0 if R = 1)
    double pcs = 0.0;     // fraction of replications selecting the true rank
    double pcs_se = 0.0;  // binomial standard error sqrt(pcs (1 - pcs) / R)
    int failures = 0;
};

struct SummaryTable {
    std::vector<SummaryRow> rows;
    int replications = 0;
    int true_k = 0;
    double sigma2 = 0.0;
    double gamma = 0.0;
    double delta_n = 0.0;
    double lambda_gamma = 0.0;        // NaN when sigma = 0 or gamma < 2
    double lambda_gamma_delta = 0.0;  // NaN when sigma = 0
};

/// Run all replications (in parallel when threads != 1) and aggregate.
/// Output is bit-identical for any thread count: replication index fully
/// determines each draw, and aggregation folds in index order.
/// threads <= 0 means hardware concurrency.
SummaryTable run_experiment(const ExperimentConfig& config, int threads = 0);

const char* to_string(Scenario scenario);
const char* to_string(Estimator estimator);
Scenario parse_scenario(const std::string& token);
Estimator parse_estimator(const std::string& token);

}  // namespace specrank
