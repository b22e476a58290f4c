#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tvgl/admm.hpp"
#include "tvgl/types.hpp"

namespace tvgl {

/// Knobs of the synthetic benchmark generator: a stochastic-block-model
/// initial graph, per-edge multiplicative VAR weight dynamics, Student-t
/// signals from the Laplacian pseudo-inverse, then masking and noise.
struct SynthConfig {
    int p = 50;
    int T = 1000;
    int frame_length = 200;
    int clusters = 4;
    double intra_prob = 0.5;
    double inter_prob = 0.05;
    double weight_low = 1.0;
    double weight_high = 3.0;
    double var_rate = 1.0;
    double innovation_std = 0.1;
    double nu = 3.0;
    double sampling_rate = 1.0;
    double noise_std = 0.0;
    std::uint64_t seed = 0;

    enum class Innovation { gaussian, laplace };
    Innovation innovation = Innovation::gaussian;

    int frame_count() const { return T / frame_length; }
    void validate() const;
};

/// Contiguous near-equal node blocks used by the SBM.
std::vector<int> block_assignment(int p, int clusters);

/// SBM initial weights: Bernoulli edge presence (intra_prob within blocks,
/// inter_prob across), weights uniform in [weight_low, weight_high].
EdgeWeights generate_initial_graph(const SynthConfig& cfg);

/// Per-edge VAR coefficients a ~ Exponential(var_rate), drawn once per
/// sequence and reused across frames.
Vector draw_var_coefficients(const SynthConfig& cfg, std::mt19937_64& rng);

/// One VAR step w_next = (a .* w_prev + eps)_+ with a caller-supplied a.
EdgeWeights evolve_weights(const EdgeWeights& w_prev, const Vector& a,
                           const SynthConfig& cfg, std::mt19937_64& rng);

/// Convenience form that draws a fresh a and returns it with the new weights.
std::pair<EdgeWeights, Vector> evolve_weights(const EdgeWeights& w_prev,
                                              const SynthConfig& cfg, std::uint64_t seed);

/// Student-t graph signals x_t = (L^+)^{1/2} v_t with v_t ~ St(0, I, nu).
/// Eigenvalues at or below 1e-8 * lambda_max are zeroed in the pseudo-inverse.
Matrix sample_signals(const EdgeWeights& w, int T_n, double nu, std::uint64_t seed);
Matrix sample_signals(const EdgeWeights& w, int T_n, double nu, std::mt19937_64& rng);

/// Center each row and scale it by its standard deviation.
Matrix normalize_rows(const Matrix& X);

/// Center and scale each row by its standard deviation, then apply a
/// Bernoulli(sampling_rate) mask and additive N(0, noise_std^2) noise:
/// Y = M .* (X + N). Normalization spans all columns of X.
FrameObservation corrupt(const Matrix& X, const SynthConfig& cfg, std::uint64_t seed);

/// A full generated benchmark: observations plus per-frame ground truth.
struct SynthDataset {
    Matrix X;  // clean, row-normalized signals, p x T
    Matrix Y;  // corrupted observations
    Matrix M;  // sampling mask
    std::vector<EdgeWeights> true_weights;  // per frame, unit mean degree scale
    std::vector<Matrix> true_laplacians;
    Vector var_coefficients;

    std::vector<FrameObservation> frames(int frame_length) const;
};

/// Run the whole pipeline. Ground-truth weights are globally rescaled so the
/// initial graph has unit mean degree, putting them on the same scale as
/// estimates learned under the degree target d = 1.
SynthDataset generate_dataset(const SynthConfig& cfg);

}  // namespace tvgl
