#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "specrank/rng.hpp"

namespace specrank {

using Matrix = Eigen::MatrixXd;

/// The three noise ensembles. All of them produce real symmetric matrices
/// whose bulk spectrum follows the semicircle law after assembly scaling.
enum class NoiseProfile {
    Goe,               // Gaussian orthogonal ensemble, entries already O(1/sqrt(n))
    RademacherWigner,  // i.i.d. random signs, unit entry variance
    ToeplitzHankel,    // entrywise product of Gaussian Toeplitz and Hankel matrices
};

/// Signal part of the model: eigenvalues lambda_1 >= ... >= lambda_k > 0 of
/// the low-rank component, plus the noise level sigma. sigma = 0 is allowed
/// (noiseless), and lambdas below sigma are allowed so that sub-threshold
/// experiments remain expressible.
struct SpikeConfig {
    std::vector<double> lambdas;
    double sigma = 1.0;

    int k() const { return static_cast<int>(lambdas.size()); }
    void validate() const;  // throws std::invalid_argument
};

/// GOE matrix: upper off-diagonal entries N(0, 1/n), diagonal N(0, 2/n).
Matrix sample_goe(int n, RngStream& rng);

/// Wigner matrix with Rademacher entries (diagonal included): every entry
/// is an independent sign, so the entry variance is exactly 1.
Matrix sample_rademacher_wigner(int n, RngStream& rng);

/// Entrywise (Schur-Hadamard) product T o H of a symmetric Toeplitz matrix
/// T_ij = t_|i-j| and a Hankel matrix H_ij = h_(i+j), both with i.i.d.
/// standard normal generating sequences. Sampling order: t first, then h.
/// Unit entry variance; scaling to sigma/sqrt(n) happens at assembly.
Matrix sample_toeplitz_hankel(int n, RngStream& rng);

/// Uniformly random n x k frame (orthonormal columns): QR of a Gaussian
/// matrix with the R diagonal sign-fixed to positive.
Matrix sample_spike_frame(int n, int k, RngStream& rng);

/// Observation matrix X = sum_i lambda_i u_i u_i^T + noise, where the noise
/// is sigma * G for the GOE profile and (sigma / sqrt(n)) * W otherwise.
/// A fresh frame is drawn on every call (frame first, then noise).
/// The result is exactly symmetric, built from its upper triangle.
Matrix assemble_observation(const SpikeConfig& spikes, NoiseProfile profile, int n,
                            RngStream& rng);

const char* to_string(NoiseProfile profile);
NoiseProfile parse_noise_profile(const std::string& token);

}  // namespace specrank
