#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace specrank {

/// Eigenvalues of one observation matrix, sorted descending. This is the
/// sole input to every selection rule, so the eigensolver is invoked once
/// per observation and everything downstream works on this struct.
struct Spectrum {
    std::vector<double> values;  // l_1 >= l_2 >= ... >= l_n

    int n() const { return static_cast<int>(values.size()); }
};

/// Eigenvalues (no eigenvectors) of a symmetric matrix, descending.
/// The input must be symmetric within 1e-10 entrywise.
Spectrum eigenvalues_desc(const Eigen::MatrixXd& x);

/// Number of eigensolves performed so far in this process. Exists so tests
/// can assert the one-solve-per-replication invariant of the harness.
std::uint64_t eigensolve_call_count();

/// psi_sigma(x) = x + sigma^2 / x, the almost-sure limit of the observed
/// eigenvalue produced by a spike of strength x. Minimum 2*sigma at x = sigma.
double psi(double sigma, double x);

/// Inverse of psi_sigma on its increasing branch [sigma, inf).
/// Requires y >= 2*sigma.
double psi_inverse(double sigma, double y);

/// lambda_gamma = psi_sigma^{-1}(sqrt(2*gamma)*sigma): the smallest spike
/// strength at which the penalty-gamma criterion separates signal from
/// bulk. Requires gamma >= 2; equals sigma at gamma = 2.
double lambda_threshold(double sigma, double gamma);

/// Semicircle density with variance sigma2, supported on [-2*sigma, 2*sigma].
double semicircle_density(double x, double sigma2);

/// CDF of the standard (sigma2 = 1) semicircle law, closed form.
double semicircle_cdf(double x);

/// q_alpha with alpha = integral of the standard semicircle density over
/// [q_alpha, 2]; computed by bisection on the closed-form CDF.
double semicircle_upper_quantile(double alpha);

/// integral of x^2 * semicircle density (sigma2 = 1) over [-q, q], q in [0, 2].
/// Closed form; equals 1 at q = 2.
double truncated_second_moment(double q);

}  // namespace specrank
