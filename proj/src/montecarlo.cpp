#include "specrank/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace specrank {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double gamma_for(const ExperimentConfig& config, Estimator estimator) {
    switch (estimator) {
        case Estimator::Aic: return 2.0;
        case Estimator::GaicDelta: return 2.0 + config.delta_n();
        case Estimator::GaicGamma: return config.gamma;
        case Estimator::Saic: return 2.0;
        case Estimator::Scree: return 2.0;  // unused
    }
    return 2.0;
}

// Plug-in sigma^2 values per scenario, computed at most once per spectrum.
struct ScenarioPlugs {
    double oracle = kNan;
    double naive = kNan;
    double trimmed = kNan;

    static ScenarioPlugs prepare(const ExperimentConfig& config,
                                 const Spectrum& spectrum, bool need_naive,
                                 bool need_trimmed) {
        ScenarioPlugs plugs;
        plugs.oracle = config.spikes.sigma * config.spikes.sigma;
        if (plugs.oracle == 0.0) {
            // Noiseless runs: the known-sigma scores need a positive sigma^2,
            // so substitute a floor far below the data scale. Any rank whose
            // residual is exactly numerical noise then wins on the penalty.
            plugs.oracle =
                std::fmax(1e-12 * sigma2_naive(spectrum),
                          std::numeric_limits<double>::min());
        }
        // A plug that cannot be computed stays NaN; only the cells that
        // need it fail, not the whole replication.
        if (need_naive) {
            try {
                plugs.naive = sigma2_naive(spectrum);
            } catch (const std::exception&) {
            }
        }
        if (need_trimmed) {
            try {
                plugs.trimmed = sigma2_trimmed(spectrum, config.alpha);
            } catch (const std::exception&) {
            }
        }
        return plugs;
    }

    double for_scenario(Scenario scenario) const {
        switch (scenario) {
            case Scenario::S1: return oracle;
            case Scenario::S2: return naive;
            case Scenario::S3: return trimmed;
            case Scenario::S4: break;
        }
        return kNan;
    }
};

int evaluate_cell(const ExperimentConfig& config, const Spectrum& spectrum,
                  const ScenarioPlugs& plugs, const CellSpec& cell) {
    if (cell.estimator == Estimator::Scree) {
        return scree(spectrum, config.q, std::sqrt(plugs.for_scenario(cell.scenario)));
    }
    if (cell.estimator == Estimator::Saic) {
        // The threshold always needs a sigma^2 estimate; with unknown-sigma
        // scores the full-spectrum MLE (the rank-0 model's MLE) is used.
        if (cell.scenario == Scenario::S4) {
            return soft_aic(spectrum, config.q, config.soft_b, plugs.naive,
                            SigmaMode::Unknown);
        }
        return soft_aic(spectrum, config.q, config.soft_b,
                        plugs.for_scenario(cell.scenario), SigmaMode::Known);
    }
    const double gamma = gamma_for(config, cell.estimator);
    if (cell.scenario == Scenario::S4) {
        return khat_gamma_unknown(spectrum, gamma, config.q);
    }
    return khat_gamma(spectrum, gamma, plugs.for_scenario(cell.scenario), config.q);
}

}  // namespace

double ExperimentConfig::delta_n() const {
    return delta_coefficient / std::sqrt(static_cast<double>(n));
}

void ExperimentConfig::validate() const {
    try {
        spikes.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("spikes: ") + e.what());
    }
    if (n < 1) throw ConfigError("n must be at least 1");
    if (spikes.k() > n) throw ConfigError("spike count k must not exceed n");
    if (q < 0 || q >= n) throw ConfigError("q must satisfy 0 <= q < n");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
        throw ConfigError("gamma must be finite and >= 0");
    }
    if (!(delta_coefficient >= 0.0) || !std::isfinite(delta_coefficient)) {
        throw ConfigError("delta_coefficient must be finite and >= 0");
    }
    if (!(soft_b >= 1.0) || !std::isfinite(soft_b)) {
        throw ConfigError("soft_b must be finite and >= 1");
    }
    if (!(alpha > 0.0) || !(alpha < 0.5)) {
        throw ConfigError("alpha must lie in (0, 1/2)");
    }
    if (scenarios.empty()) throw ConfigError("scenarios must be nonempty");
    if (estimators.empty()) throw ConfigError("estimators must be nonempty");
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        for (std::size_t j = i + 1; j < scenarios.size(); ++j) {
            if (scenarios[i] == scenarios[j]) {
                throw ConfigError("duplicate scenario in config");
            }
        }
    }
    for (std::size_t i = 0; i < estimators.size(); ++i) {
        for (std::size_t j = i + 1; j < estimators.size(); ++j) {
            if (estimators[i] == estimators[j]) {
                throw ConfigError("duplicate estimator in config");
            }
        }
    }
    if (replications < 1) throw ConfigError("replications must be at least 1");
    if (experiment_cells(*this).empty()) {
        throw ConfigError("config selects no estimator/scenario cells "
                          "(scree is not defined for scenario S4)");
    }
}

std::vector<CellSpec> experiment_cells(const ExperimentConfig& config) {
    std::vector<CellSpec> cells;
    cells.reserve(config.estimators.size() * config.scenarios.size());
    for (const Estimator estimator : config.estimators) {
        for (const Scenario scenario : config.scenarios) {
            if (estimator == Estimator::Scree && scenario == Scenario::S4) {
                continue;  // unknown-sigma scores do not yield a sigma_hat
            }
            cells.push_back({estimator, scenario});
        }
    }
    return cells;
}

std::vector<std::optional<int>> run_replication(const ExperimentConfig& config,
                                                int index) {
    config.validate();
    if (index < 0 || index >= config.replications) {
        throw std::out_of_range("replication index out of range");
    }
    const auto cells = experiment_cells(config);
    std::vector<std::optional<int>> selected(cells.size());

    const bool need_naive =
        std::any_of(cells.begin(), cells.end(), [](const CellSpec& c) {
            return c.scenario == Scenario::S2 ||
                   (c.scenario == Scenario::S4 && c.estimator == Estimator::Saic);
        });
    const bool need_trimmed =
        std::any_of(cells.begin(), cells.end(),
                    [](const CellSpec& c) { return c.scenario == Scenario::S3; });

    try {
        RngStream rng(config.master_seed, static_cast<std::uint64_t>(index));
        const Matrix x = assemble_observation(config.spikes, config.profile,
                                              config.n, rng);
        const Spectrum spectrum = eigenvalues_desc(x);
        const auto plugs =
            ScenarioPlugs::prepare(config, spectrum, need_naive, need_trimmed);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            try {
                selected[c] = evaluate_cell(config, spectrum, plugs, cells[c]);
            } catch (const std::exception&) {
                selected[c] = std::nullopt;
            }
        }
    } catch (const std::exception&) {
        // Sampling or the eigensolve failed: every cell of this draw fails,
        // but the batch keeps going.
    }
    return selected;
}

SummaryTable run_experiment(const ExperimentConfig& config, int threads) {
    config.validate();
    const auto cells = experiment_cells(config);
    const int replications = config.replications;

    std::vector<std::vector<std::optional<int>>> per_replication(replications);
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads < 1) threads = 1;
    }
    const int workers = std::min(threads, replications);
    if (workers <= 1) {
        for (int i = 0; i < replications; ++i) {
            per_replication[i] = run_replication(config, i);
        }
    } else {
        std::atomic<int> next_index{0};
        auto worker = [&] {
            while (true) {
                const int i = next_index.fetch_add(1, std::memory_order_relaxed);
                if (i >= replications) break;
                per_replication[i] = run_replication(config, i);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    SummaryTable table;
    table.replications = replications;
    table.true_k = config.spikes.k();
    table.sigma2 = config.spikes.sigma * config.spikes.sigma;
    table.gamma = config.gamma;
    table.delta_n = config.delta_n();
    const bool thresholds_defined = config.spikes.sigma > 0.0;
    table.lambda_gamma = thresholds_defined && config.gamma >= 2.0
                             ? lambda_threshold(config.spikes.sigma, config.gamma)
                             : kNan;
    table.lambda_gamma_delta =
        thresholds_defined
            ? lambda_threshold(config.spikes.sigma, 2.0 + config.delta_n())
            : kNan;

    table.rows.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        SummaryRow row;
        row.estimator = cells[c].estimator;
        row.scenario = cells[c].scenario;

        // Selected ranks are small integers, so the sums below are exact and
        // the aggregate is bit-identical no matter how replications were
        // scheduled.
        long sum = 0;
        long correct = 0;
        int successes = 0;
        for (int i = 0; i < replications; ++i) {
            const auto& value = per_replication[i][c];
            if (!value) continue;
            ++successes;
            sum += *value;
            if (*value == table.true_k) ++correct;
        }
        row.failures = replications - successes;
        if (successes == 0) {
            row.mean = kNan;
            row.sd = kNan;
        } else {
            row.mean = static_cast<double>(sum) / successes;
            double squared = 0.0;
            for (int i = 0; i < replications; ++i) {
                const auto& value = per_replication[i][c];
                if (!value) continue;
                const double d = *value - row.mean;
                squared += d * d;
            }
            row.sd = successes > 1 ? std::sqrt(squared / (successes - 1)) : 0.0;
        }
        row.pcs = static_cast<double>(correct) / replications;
        row.pcs_se = std::sqrt(row.pcs * (1.0 - row.pcs) / replications);
        table.rows.push_back(row);
    }
    return table;
}

const char* to_string(Scenario scenario) {
    switch (scenario) {
        case Scenario::S1: return "S1";
        case Scenario::S2: return "S2";
        case Scenario::S3: return "S3";
        case Scenario::S4: return "S4";
    }
    return "?";
}

const char* to_string(Estimator estimator) {
    switch (estimator) {
        case Estimator::Aic: return "aic";
        case Estimator::GaicDelta: return "gaic-delta";
        case Estimator::Saic: return "saic";
        case Estimator::GaicGamma: return "gaic-gamma";
        case Estimator::Scree: return "scree";
    }
    return "?";
}

Scenario parse_scenario(const std::string& token) {
    if (token == "S1" || token == "s1" || token == "S-1") return Scenario::S1;
    if (token == "S2" || token == "s2" || token == "S-2") return Scenario::S2;
    if (token == "S3" || token == "s3" || token == "S-3") return Scenario::S3;
    if (token == "S4" || token == "s4" || token == "S-4") return Scenario::S4;
    throw ConfigError("unknown scenario '" + token + "' (expected S1..S4)");
}

Estimator parse_estimator(const std::string& token) {
    if (token == "aic") return Estimator::Aic;
    if (token == "gaic-delta") return Estimator::GaicDelta;
    if (token == "saic") return Estimator::Saic;
    if (token == "gaic-gamma") return Estimator::GaicGamma;
    if (token == "scree") return Estimator::Scree;
    throw ConfigError("unknown estimator '" + token +
                      "' (expected aic, gaic-delta, saic, gaic-gamma or scree)");
}

}  // namespace specrank
