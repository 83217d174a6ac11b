#include "specrank/ensembles.hpp"

#include <cmath>
#include <stdexcept>

namespace specrank {

namespace {

void require_dimension(int n) {
    if (n < 1) {
        throw std::invalid_argument("matrix dimension must be at least 1");
    }
}

}  // namespace

void SpikeConfig::validate() const {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("sigma must be finite and >= 0");
    }
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0) || !std::isfinite(lambdas[i])) {
            throw std::invalid_argument("spike eigenvalues must be finite and > 0");
        }
        if (i > 0 && lambdas[i] > lambdas[i - 1]) {
            throw std::invalid_argument("spike eigenvalues must be descending");
        }
    }
}

Matrix sample_goe(int n, RngStream& rng) {
    require_dimension(n);
    const double off_sd = 1.0 / std::sqrt(static_cast<double>(n));
    const double diag_sd = std::sqrt(2.0 / static_cast<double>(n));
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = diag_sd * rng.next_normal();
        for (int j = i + 1; j < n; ++j) {
            const double v = off_sd * rng.next_normal();
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return m;
}

Matrix sample_rademacher_wigner(int n, RngStream& rng) {
    require_dimension(n);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = rng.next_sign();
        for (int j = i + 1; j < n; ++j) {
            const double v = rng.next_sign();
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return m;
}

Matrix sample_toeplitz_hankel(int n, RngStream& rng) {
    require_dimension(n);
    std::vector<double> t(n);
    for (double& v : t) v = rng.next_normal();
    std::vector<double> h(2 * n - 1);
    for (double& v : h) v = rng.next_normal();

    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double v = t[j - i] * h[i + j];
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return m;
}

Matrix sample_spike_frame(int n, int k, RngStream& rng) {
    require_dimension(n);
    if (k < 0 || k > n) {
        throw std::invalid_argument("frame width k must satisfy 0 <= k <= n");
    }
    if (k == 0) {
        return Matrix(n, 0);
    }
    Matrix gaussian(n, k);
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < n; ++i) {
            gaussian(i, j) = rng.next_normal();
        }
    }
    Eigen::HouseholderQR<Matrix> qr(gaussian);
    Matrix frame = qr.householderQ() * Matrix::Identity(n, k);
    // Fixing the R diagonal to be positive makes the frame Haar-distributed.
    for (int j = 0; j < k; ++j) {
        if (qr.matrixQR()(j, j) < 0.0) {
            frame.col(j) = -frame.col(j);
        }
    }
    return frame;
}

Matrix assemble_observation(const SpikeConfig& spikes, NoiseProfile profile, int n,
                            RngStream& rng) {
    require_dimension(n);
    spikes.validate();
    const int k = spikes.k();
    if (k > n) {
        throw std::invalid_argument("spike count k must not exceed the dimension n");
    }

    const Matrix frame = sample_spike_frame(n, k, rng);

    Matrix x;
    switch (profile) {
        case NoiseProfile::Goe:
            x = spikes.sigma * sample_goe(n, rng);
            break;
        case NoiseProfile::RademacherWigner:
            x = (spikes.sigma / std::sqrt(static_cast<double>(n))) *
                sample_rademacher_wigner(n, rng);
            break;
        case NoiseProfile::ToeplitzHankel:
            x = (spikes.sigma / std::sqrt(static_cast<double>(n))) *
                sample_toeplitz_hankel(n, rng);
            break;
    }

    if (k > 0) {
        const Eigen::Map<const Eigen::VectorXd> lambdas(spikes.lambdas.data(), k);
        x += frame * lambdas.asDiagonal() * frame.transpose();
        // The rank-k update is only symmetric up to rounding; rebuild the
        // lower triangle from the upper one so the contract is exact.
        x.triangularView<Eigen::StrictlyLower>() = x.transpose();
    }
    return x;
}

const char* to_string(NoiseProfile profile) {
    switch (profile) {
        case NoiseProfile::Goe: return "goe";
        case NoiseProfile::RademacherWigner: return "rademacher";
        case NoiseProfile::ToeplitzHankel: return "toeplitz-hankel";
    }
    return "?";
}

NoiseProfile parse_noise_profile(const std::string& token) {
    if (token == "goe") return NoiseProfile::Goe;
    if (token == "rademacher") return NoiseProfile::RademacherWigner;
    if (token == "toeplitz-hankel") return NoiseProfile::ToeplitzHankel;
    throw std::invalid_argument("unknown noise profile '" + token +
                                "' (expected goe, rademacher or toeplitz-hankel)");
}

}  // namespace specrank
