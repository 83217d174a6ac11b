#pragma once

#include <vector>

#include "specrank/spectral.hpp"

namespace specrank {

/// Whether scores were computed with a supplied sigma^2 (oracle or plug-in
/// estimate) or with the per-model maximum-likelihood sigma^2.
enum class SigmaMode { Known, Unknown };

/// Penalized fit scores indexed by candidate rank j = 0..q. Only the
/// j-dependent terms are kept; constants shared by all candidates are
/// dropped since they cannot change the argmin.
struct ScoreVector {
    std::vector<double> scores;  // length q + 1
    double gamma = 2.0;
    SigmaMode mode = SigmaMode::Known;
};

/// MLE of sigma^2 under the rank-j model: sum of the squared eigenvalues
/// below rank j, divided by n + 1.
double sigma2_mle(const Spectrum& spectrum, int j);

/// Full-spectrum estimate sum_i l_i^2 / (n + 1) == sigma2_mle(spectrum, 0).
/// Overestimates sigma^2 when large spikes are present.
double sigma2_naive(const Spectrum& spectrum);

/// Trimmed estimate: drop the top and bottom alpha fractions by rank, then
/// rescale the remaining second moment by the matching truncated moment of
/// the standard semicircle law. alpha in (0, 1/2), floor(alpha * n) >= 1.
double sigma2_trimmed(const Spectrum& spectrum, double alpha);

/// Scores for known sigma:
///   scores[j] = (n / (2 sigma^2)) * sum_{i>j} l_i^2 + gamma * (n j - j(j-1)/2).
ScoreVector gaic_scores_known_sigma(const Spectrum& spectrum, double gamma,
                                    double sigma2, int q);

/// Scores for unknown sigma, after substituting the per-model MLE of
/// sigma^2 (which turns the weighted residual term into a constant):
///   scores[j] = (n(n+1)/2) * log sigma2_mle(j) + gamma * (1 + n j - j(j-1)/2).
ScoreVector gaic_scores_unknown_sigma(const Spectrum& spectrum, double gamma, int q);

/// Smallest index attaining the minimum score.
int select_min(const ScoreVector& scores);

/// Rank selected by minimizing the known-sigma scores with penalty gamma.
int khat_gamma(const Spectrum& spectrum, double gamma, double sigma2, int q);

/// Rank selected by minimizing the unknown-sigma scores with penalty gamma.
int khat_gamma_unknown(const Spectrum& spectrum, double gamma, int q);

/// Soft minimizer of AIC (gamma = 2): smallest j whose normalized score
/// deviation |AIC_j - min| / n falls below xi_hat / 3, where
///   xi_hat = (1 / (q B)) * sum_{j=1..q} (l_j^2 - 4 sigma2_hat) / (2 sigma2_hat).
/// sigma2_hat feeds the threshold always, and the scores too in Known mode.
/// Falls back to the plain argmin when xi_hat <= 0.
int soft_aic(const Spectrum& spectrum, int q, double b, double sigma2_hat,
             SigmaMode mode = SigmaMode::Known);

/// Largest j in {1..q} with l_j > 2 * sigma_hat, or 0 when there is none.
int scree(const Spectrum& spectrum, int q, double sigma_hat);

}  // namespace specrank
