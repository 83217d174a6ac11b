#include "specrank/spectral.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace specrank {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kSymmetryTolerance = 1e-10;

std::atomic<std::uint64_t> g_eigensolve_calls{0};

}  // namespace

Spectrum eigenvalues_desc(const Eigen::MatrixXd& x) {
    const int n = static_cast<int>(x.rows());
    if (n < 1 || x.cols() != x.rows()) {
        throw std::invalid_argument("eigenvalues_desc requires a square matrix");
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(x(i, j) - x(j, i)) > kSymmetryTolerance) {
                throw std::invalid_argument(
                    "eigenvalues_desc requires a symmetric matrix (entrywise 1e-10)");
            }
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(x, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("symmetric eigensolver failed to converge");
    }
    g_eigensolve_calls.fetch_add(1, std::memory_order_relaxed);

    // Solver returns ascending order; reversing keeps equal values in
    // solver order, which is the documented tie-break.
    Spectrum spectrum;
    spectrum.values.resize(n);
    const auto& ascending = solver.eigenvalues();
    for (int i = 0; i < n; ++i) {
        spectrum.values[i] = ascending(n - 1 - i);
    }
    return spectrum;
}

std::uint64_t eigensolve_call_count() {
    return g_eigensolve_calls.load(std::memory_order_relaxed);
}

double psi(double sigma, double x) {
    if (!(sigma > 0.0)) throw std::domain_error("psi requires sigma > 0");
    if (!(x > 0.0)) throw std::domain_error("psi requires x > 0");
    return x + sigma * sigma / x;
}

double psi_inverse(double sigma, double y) {
    if (!(sigma > 0.0)) throw std::domain_error("psi_inverse requires sigma > 0");
    if (!(y >= 2.0 * sigma)) {
        throw std::domain_error("psi_inverse requires y >= 2*sigma");
    }
    const double discriminant = std::fmax(y * y - 4.0 * sigma * sigma, 0.0);
    return 0.5 * (y + std::sqrt(discriminant));
}

double lambda_threshold(double sigma, double gamma) {
    if (!(sigma > 0.0)) throw std::domain_error("lambda_threshold requires sigma > 0");
    if (!(gamma >= 2.0)) {
        throw std::domain_error("lambda_threshold requires gamma >= 2");
    }
    return psi_inverse(sigma, std::sqrt(2.0 * gamma) * sigma);
}

double semicircle_density(double x, double sigma2) {
    if (!(sigma2 > 0.0)) {
        throw std::domain_error("semicircle_density requires sigma2 > 0");
    }
    const double support = 4.0 * sigma2 - x * x;
    if (support <= 0.0) return 0.0;
    return std::sqrt(support) / (2.0 * kPi * sigma2);
}

double semicircle_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * kPi) + std::asin(0.5 * x) / kPi;
}

double semicircle_upper_quantile(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw std::domain_error("semicircle_upper_quantile requires alpha in (0, 1)");
    }
    // F(q) = 1 - alpha; F is strictly increasing on (-2, 2).
    const double target = 1.0 - alpha;
    double lo = -2.0;
    double hi = 2.0;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (semicircle_cdf(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double truncated_second_moment(double q) {
    if (!(q >= 0.0) || !(q <= 2.0)) {
        throw std::domain_error("truncated_second_moment requires q in [0, 2]");
    }
    // Substituting x = 2 sin(theta) turns the integrand into
    // (1 - cos(4 theta)) / pi, which integrates in closed form.
    const double theta = std::asin(0.5 * q);
    return 2.0 * theta / kPi - std::sin(4.0 * theta) / (2.0 * kPi);
}

}  // namespace specrank
