#include "specrank/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specrank {

namespace {

// suffix[j] = sum_{i > j} l_i^2 (1-based i), i.e. the squared Frobenius
// norm of the residual after keeping the top j eigenvalues.
std::vector<double> suffix_squares(const Spectrum& spectrum) {
    const int n = spectrum.n();
    std::vector<double> suffix(n + 1, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        suffix[i] = suffix[i + 1] + spectrum.values[i] * spectrum.values[i];
    }
    return suffix;
}

void require_candidate_range(const Spectrum& spectrum, int q) {
    if (q < 0 || q >= spectrum.n()) {
        throw std::out_of_range("candidate count q must satisfy 0 <= q < n");
    }
}

double penalty_dimension(int n, int j) {
    // Parameter count of the rank-j signal: j eigenvalues plus a j-frame.
    return static_cast<double>(n) * j - 0.5 * j * (j - 1.0);
}

}  // namespace

double sigma2_mle(const Spectrum& spectrum, int j) {
    const int n = spectrum.n();
    if (j < 0 || j >= n) {
        throw std::out_of_range("sigma2_mle requires 0 <= j < n");
    }
    double tail = 0.0;
    for (int i = n - 1; i >= j; --i) {
        tail += spectrum.values[i] * spectrum.values[i];
    }
    return tail / (n + 1.0);
}

double sigma2_naive(const Spectrum& spectrum) { return sigma2_mle(spectrum, 0); }

double sigma2_trimmed(const Spectrum& spectrum, double alpha) {
    const int n = spectrum.n();
    if (!(alpha > 0.0) || !(alpha < 0.5)) {
        throw std::domain_error("sigma2_trimmed requires alpha in (0, 1/2)");
    }
    const int first_rank = static_cast<int>(std::floor(alpha * n));        // 1-based
    const int last_rank = static_cast<int>(std::floor((1.0 - alpha) * n));  // 1-based
    if (first_rank < 1) {
        throw std::domain_error("sigma2_trimmed requires floor(alpha * n) >= 1");
    }
    double kept = 0.0;
    for (int r = first_rank; r <= last_rank; ++r) {
        kept += spectrum.values[r - 1] * spectrum.values[r - 1];
    }
    const double q_alpha = semicircle_upper_quantile(alpha);
    return (kept / n) / truncated_second_moment(q_alpha);
}

ScoreVector gaic_scores_known_sigma(const Spectrum& spectrum, double gamma,
                                    double sigma2, int q) {
    require_candidate_range(spectrum, q);
    if (!(sigma2 > 0.0)) {
        throw std::domain_error("gaic_scores_known_sigma requires sigma2 > 0");
    }
    if (!(gamma >= 0.0)) {
        throw std::domain_error("penalty factor gamma must be >= 0");
    }
    const int n = spectrum.n();
    const auto suffix = suffix_squares(spectrum);
    const double fit_weight = n / (2.0 * sigma2);

    ScoreVector result{std::vector<double>(q + 1), gamma, SigmaMode::Known};
    for (int j = 0; j <= q; ++j) {
        result.scores[j] = fit_weight * suffix[j] + gamma * penalty_dimension(n, j);
    }
    return result;
}

ScoreVector gaic_scores_unknown_sigma(const Spectrum& spectrum, double gamma, int q) {
    require_candidate_range(spectrum, q);
    if (!(gamma >= 0.0)) {
        throw std::domain_error("penalty factor gamma must be >= 0");
    }
    const int n = spectrum.n();
    const auto suffix = suffix_squares(spectrum);

    ScoreVector result{std::vector<double>(q + 1), gamma, SigmaMode::Unknown};
    for (int j = 0; j <= q; ++j) {
        const double sigma2_j = suffix[j] / (n + 1.0);
        if (!(sigma2_j > 0.0)) {
            throw std::domain_error(
                "degenerate candidate model: residual eigenvalues are all zero");
        }
        result.scores[j] =
            0.5 * n * (n + 1.0) * std::log(sigma2_j) +
            gamma * (1.0 + penalty_dimension(n, j));
    }
    return result;
}

int select_min(const ScoreVector& scores) {
    if (scores.scores.empty()) {
        throw std::invalid_argument("select_min requires a nonempty score vector");
    }
    const auto it = std::min_element(scores.scores.begin(), scores.scores.end());
    return static_cast<int>(it - scores.scores.begin());
}

int khat_gamma(const Spectrum& spectrum, double gamma, double sigma2, int q) {
    return select_min(gaic_scores_known_sigma(spectrum, gamma, sigma2, q));
}

int khat_gamma_unknown(const Spectrum& spectrum, double gamma, int q) {
    return select_min(gaic_scores_unknown_sigma(spectrum, gamma, q));
}

int soft_aic(const Spectrum& spectrum, int q, double b, double sigma2_hat,
             SigmaMode mode) {
    require_candidate_range(spectrum, q);
    if (!(b >= 1.0)) {
        throw std::invalid_argument("soft_aic requires B >= 1");
    }
    if (!(sigma2_hat > 0.0)) {
        throw std::invalid_argument("soft_aic requires sigma2_hat > 0");
    }
    const ScoreVector aic = mode == SigmaMode::Known
                                ? gaic_scores_known_sigma(spectrum, 2.0, sigma2_hat, q)
                                : gaic_scores_unknown_sigma(spectrum, 2.0, q);
    if (q == 0) {
        return 0;
    }

    double xi_sum = 0.0;
    for (int j = 1; j <= q; ++j) {
        const double l = spectrum.values[j - 1];
        xi_sum += (l * l - 4.0 * sigma2_hat) / (2.0 * sigma2_hat);
    }
    const double xi_hat = xi_sum / (q * b);
    if (!(xi_hat > 0.0)) {
        return select_min(aic);
    }

    const double min_score = *std::min_element(aic.scores.begin(), aic.scores.end());
    const double n = spectrum.n();
    for (int j = 0; j <= q; ++j) {
        if (std::abs(aic.scores[j] - min_score) / n < xi_hat / 3.0) {
            return j;
        }
    }
    return select_min(aic);
}

int scree(const Spectrum& spectrum, int q, double sigma_hat) {
    require_candidate_range(spectrum, q);
    if (!(sigma_hat > 0.0)) {
        throw std::invalid_argument("scree requires sigma_hat > 0");
    }
    int selected = 0;
    for (int j = 1; j <= q; ++j) {
        if (spectrum.values[j - 1] > 2.0 * sigma_hat) {
            selected = j;
        }
    }
    return selected;
}

}  // namespace specrank
