#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "quadrature_oracle.hpp"
#include "specrank/rng.hpp"
#include "specrank/spectral.hpp"

using namespace specrank;

namespace {

Eigen::MatrixXd random_symmetric(int n, RngStream& rng) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = rng.next_normal();
        for (int j = i + 1; j < n; ++j) {
            const double v = rng.next_normal();
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return m;
}

}  // namespace

TEST_CASE("eigenvalues of simple matrices") {
    Eigen::MatrixXd d = Eigen::Vector3d(3.0, 1.0, 2.0).asDiagonal();
    const Spectrum s = eigenvalues_desc(d);
    CHECK(s.values[0] == doctest::Approx(3.0));
    CHECK(s.values[1] == doctest::Approx(2.0));
    CHECK(s.values[2] == doctest::Approx(1.0));

    const Spectrum id = eigenvalues_desc(Eigen::MatrixXd::Identity(6, 6));
    for (const double v : id.values) CHECK(v == doctest::Approx(1.0));

    Eigen::VectorXd u = Eigen::VectorXd::Zero(8);
    u(2) = 0.6;
    u(5) = 0.8;  // unit vector
    const Spectrum rank_one = eigenvalues_desc(5.0 * u * u.transpose());
    CHECK(rank_one.values[0] == doctest::Approx(5.0).epsilon(1e-10));
    for (int i = 1; i < 8; ++i) CHECK(std::abs(rank_one.values[i]) < 1e-10);
}

TEST_CASE("eigenvalues_desc rejects bad input") {
    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 2.0, 3.0, 4.0;
    CHECK_THROWS_AS(eigenvalues_desc(asym), std::invalid_argument);
    CHECK_THROWS_AS(eigenvalues_desc(Eigen::MatrixXd::Zero(2, 3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(eigenvalues_desc(Eigen::MatrixXd()), std::invalid_argument);
}

TEST_CASE("spectrum preserves trace and frobenius norm") {
    RngStream rng(404, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXd m = random_symmetric(20, rng);
        const Spectrum s = eigenvalues_desc(m);
        REQUIRE(s.n() == 20);
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < s.n(); ++i) {
            sum += s.values[i];
            sum_sq += s.values[i] * s.values[i];
            if (i > 0) CHECK(s.values[i] <= s.values[i - 1]);
        }
        CHECK(sum == doctest::Approx(m.trace()).epsilon(1e-9));
        CHECK(sum_sq == doctest::Approx(m.squaredNorm()).epsilon(1e-9));
    }
}

TEST_CASE("top-j truncations achieve the tail-sum reconstruction error") {
    RngStream rng(505, 0);
    const int n = 12;
    const Eigen::MatrixXd m = random_symmetric(n, rng);
    const Spectrum s = eigenvalues_desc(m);

    // Independent full decomposition; the library never exposes vectors.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(m);
    REQUIRE(full.info() == Eigen::Success);
    for (int j = 0; j <= 5; ++j) {
        Eigen::MatrixXd approx = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < j; ++i) {
            const auto v = full.eigenvectors().col(n - 1 - i);
            approx += full.eigenvalues()(n - 1 - i) * v * v.transpose();
        }
        double tail = 0.0;
        for (int i = j; i < n; ++i) tail += s.values[i] * s.values[i];
        CHECK((m - approx).squaredNorm() == doctest::Approx(tail).epsilon(1e-8));
    }
}

TEST_CASE("psi values and domain") {
    CHECK(psi(1.0, 1.0) == doctest::Approx(2.0));
    CHECK(psi(1.0, 5.0) == doctest::Approx(5.2));
    CHECK(psi(2.0, 2.0) == doctest::Approx(4.0));
    CHECK_THROWS_AS(psi(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(psi(1.0, -1.0), std::domain_error);
    CHECK_THROWS_AS(psi(0.0, 1.0), std::domain_error);
}

TEST_CASE("psi_inverse values, domain and roundtrip") {
    CHECK(psi_inverse(1.0, 2.0) == doctest::Approx(1.0));
    CHECK(psi_inverse(1.0, 5.2) == doctest::Approx(5.0));
    CHECK(psi_inverse(1.0, 2.5) == doctest::Approx(2.0));
    CHECK_THROWS_AS(psi_inverse(1.0, 1.999), std::domain_error);

    for (const double sigma : {0.5, 1.0, 2.0}) {
        for (double y = 2.0 * sigma; y <= 100.0 * sigma; y += 0.37 * sigma) {
            const double x = psi_inverse(sigma, y);
            CHECK(x >= sigma);
            CHECK(psi(sigma, x) == doctest::Approx(y).epsilon(1e-12));
        }
    }
}

TEST_CASE("lambda_threshold matches the published two-decimal values") {
    CHECK(std::abs(lambda_threshold(1.0, 2.15) - 1.31) < 0.005);
    const double delta_n = 0.1 / std::sqrt(1000.0);
    CHECK(std::abs(lambda_threshold(1.0, 2.0 + delta_n) - 1.04) < 0.005);
    CHECK(lambda_threshold(1.0, 2.0) == doctest::Approx(1.0));
    CHECK(lambda_threshold(0.5, 2.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(lambda_threshold(1.0, 1.99), std::domain_error);

    double previous = lambda_threshold(1.0, 2.0);
    for (double gamma = 2.1; gamma < 8.0; gamma += 0.1) {
        const double current = lambda_threshold(1.0, gamma);
        CHECK(current > previous);
        previous = current;
    }
}

TEST_CASE("semicircle density: values, support, mass") {
    constexpr double pi = 3.14159265358979323846;
    CHECK(semicircle_density(0.0, 1.0) == doctest::Approx(1.0 / pi));
    CHECK(semicircle_density(2.0, 1.0) == 0.0);
    CHECK(semicircle_density(-2.0, 1.0) == 0.0);
    CHECK(semicircle_density(3.0, 4.0) > 0.0);  // support scales with sigma
    CHECK(semicircle_density(4.5, 4.0) == 0.0);
    CHECK_THROWS_AS(semicircle_density(0.0, 0.0), std::domain_error);

    const double mass = oracle::integrate(
        [](double x) { return semicircle_density(x, 1.0); }, -2.0, 2.0);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("closed-form cdf agrees with quadrature") {
    CHECK(semicircle_cdf(-2.0) == 0.0);
    CHECK(semicircle_cdf(0.0) == doctest::Approx(0.5));
    CHECK(semicircle_cdf(2.0) == 1.0);
    for (double x = -1.9; x < 2.0; x += 0.31) {
        const double by_quadrature = oracle::integrate(
            [](double t) { return semicircle_density(t, 1.0); }, -2.0, x);
        CHECK(semicircle_cdf(x) == doctest::Approx(by_quadrature).epsilon(1e-9));
    }
}

TEST_CASE("upper quantile solves its defining integral") {
    CHECK(std::abs(semicircle_upper_quantile(0.5)) < 1e-10);
    CHECK_THROWS_AS(semicircle_upper_quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(semicircle_upper_quantile(1.0), std::domain_error);

    for (const double alpha : {0.05, 0.1, 0.25, 0.4}) {
        const double q = semicircle_upper_quantile(alpha);
        const double residual = oracle::integrate(
            [](double t) { return semicircle_density(t, 1.0); }, q, 2.0);
        CHECK(residual == doctest::Approx(alpha).epsilon(1e-9));
    }

    // Independent route: root-find on the quadrature-based tail mass.
    const double q_independent = oracle::bisect(
        [](double q) {
            return oracle::integrate(
                       [](double t) { return semicircle_density(t, 1.0); }, q,
                       2.0) -
                   0.1;
        },
        -2.0, 2.0);
    CHECK(semicircle_upper_quantile(0.1) ==
          doctest::Approx(q_independent).epsilon(1e-8));
}

TEST_CASE("truncated second moment: endpoints and quadrature oracle") {
    CHECK(truncated_second_moment(0.0) == 0.0);
    CHECK(std::abs(truncated_second_moment(2.0) - 1.0) < 1e-10);
    CHECK_THROWS_AS(truncated_second_moment(-0.1), std::domain_error);
    CHECK_THROWS_AS(truncated_second_moment(2.1), std::domain_error);

    for (const double q : {0.25, 0.5, 0.9, 1.3, 1.7, 1.95, 2.0}) {
        // Smooth substitution x = 2 sin(theta) so the oracle integrates a
        // bounded-derivative function to full precision.
        const double theta_max = std::asin(0.5 * q);
        const double by_quadrature = oracle::integrate(
            [](double theta) {
                const double x = 2.0 * std::sin(theta);
                return x * x * semicircle_density(x, 1.0) * 2.0 * std::cos(theta);
            },
            -theta_max, theta_max, 1e-13);
        CHECK(std::abs(truncated_second_moment(q) - by_quadrature) < 1e-10);
    }
}

TEST_CASE("eigensolve counter increments per call") {
    const std::uint64_t before = eigensolve_call_count();
    eigenvalues_desc(Eigen::MatrixXd::Identity(4, 4));
    eigenvalues_desc(Eigen::MatrixXd::Identity(5, 5));
    CHECK(eigensolve_call_count() == before + 2);
}
