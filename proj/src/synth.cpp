#include "tvgl/synth.hpp"

#include <cmath>

#include "tvgl/errors.hpp"
#include "tvgl/graph_ops.hpp"
#include "tvgl/heavy_tail.hpp"

namespace tvgl {

void SynthConfig::validate() const {
    if (p < 2) throw ValidationError("SynthConfig: need at least 2 nodes");
    if (T < 1 || frame_length < 1 || T % frame_length != 0) {
        throw ValidationError("SynthConfig: T must be a positive multiple of frame_length");
    }
    if (clusters < 1 || clusters > p) {
        throw ValidationError("SynthConfig: cluster count must lie in [1, p]");
    }
    if (intra_prob < 0.0 || intra_prob > 1.0 || inter_prob < 0.0 || inter_prob > 1.0) {
        throw ValidationError("SynthConfig: edge probabilities must lie in [0, 1]");
    }
    if (weight_low < 0.0 || weight_high < weight_low) {
        throw ValidationError("SynthConfig: weight range must satisfy 0 <= low <= high");
    }
    if (var_rate <= 0.0) throw ValidationError("SynthConfig: var_rate must be positive");
    if (innovation_std < 0.0) throw ValidationError("SynthConfig: innovation_std must be nonnegative");
    if (nu <= 2.0) throw ValidationError("SynthConfig: nu must exceed 2");
    if (sampling_rate <= 0.0 || sampling_rate > 1.0) {
        throw ValidationError("SynthConfig: sampling_rate must lie in (0, 1]");
    }
    if (noise_std < 0.0) throw ValidationError("SynthConfig: noise_std must be nonnegative");
}

std::vector<int> block_assignment(int p, int clusters) {
    // Near-equal contiguous blocks; the first p % clusters blocks get one extra node.
    std::vector<int> labels(p);
    const int base = p / clusters;
    const int extra = p % clusters;
    int node = 0;
    for (int b = 0; b < clusters; ++b) {
        const int size = base + (b < extra ? 1 : 0);
        if (size == 0) throw ValidationError("generate_initial_graph: empty block");
        for (int s = 0; s < size; ++s) labels[node++] = b;
    }
    return labels;
}

EdgeWeights generate_initial_graph(const SynthConfig& cfg) {
    cfg.validate();
    const std::vector<int> labels = block_assignment(cfg.p, cfg.clusters);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_real_distribution<double> weight(cfg.weight_low, cfg.weight_high);

    EdgeWeights w = EdgeWeights::zeros(cfg.p);
    int e = 0;
    for (int i = 0; i < cfg.p; ++i) {
        for (int j = i + 1; j < cfg.p; ++j, ++e) {
            const double prob = labels[i] == labels[j] ? cfg.intra_prob : cfg.inter_prob;
            if (unif(rng) < prob) w.values[e] = weight(rng);
        }
    }
    return w;
}

Vector draw_var_coefficients(const SynthConfig& cfg, std::mt19937_64& rng) {
    std::exponential_distribution<double> exp_dist(cfg.var_rate);
    Vector a(edge_count(cfg.p));
    for (Eigen::Index e = 0; e < a.size(); ++e) a[e] = exp_dist(rng);
    return a;
}

EdgeWeights evolve_weights(const EdgeWeights& w_prev, const Vector& a,
                           const SynthConfig& cfg, std::mt19937_64& rng) {
    if (a.size() != w_prev.values.size()) {
        throw ValidationError("evolve_weights: VAR coefficient length mismatch");
    }
    std::normal_distribution<double> gauss(0.0, cfg.innovation_std);
    // Laplace(0, b) with variance innovation_std^2 has b = std / sqrt(2).
    std::exponential_distribution<double> laplace_mag(std::sqrt(2.0) / cfg.innovation_std);
    std::bernoulli_distribution sign(0.5);

    Vector next(w_prev.values.size());
    for (Eigen::Index e = 0; e < next.size(); ++e) {
        double eps;
        if (cfg.innovation_std == 0.0) {
            eps = 0.0;
        } else if (cfg.innovation == SynthConfig::Innovation::gaussian) {
            eps = gauss(rng);
        } else {
            eps = laplace_mag(rng) * (sign(rng) ? 1.0 : -1.0);
        }
        next[e] = std::max(a[e] * w_prev.values[e] + eps, 0.0);
    }
    return EdgeWeights(w_prev.p, std::move(next));
}

std::pair<EdgeWeights, Vector> evolve_weights(const EdgeWeights& w_prev,
                                              const SynthConfig& cfg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Vector a = draw_var_coefficients(cfg, rng);
    EdgeWeights next = evolve_weights(w_prev, a, cfg, rng);
    return {std::move(next), std::move(a)};
}

Matrix sample_signals(const EdgeWeights& w, int T_n, double nu, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return sample_signals(w, T_n, nu, rng);
}

Matrix sample_signals(const EdgeWeights& w, int T_n, double nu, std::mt19937_64& rng) {
    const int p = w.p;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(laplacian(w));
    const Vector& lam = eig.eigenvalues();
    const double cutoff = 1e-8 * std::max(lam[p - 1], 0.0);

    // (L^+)^{1/2} = U diag(lam_i^{-1/2} for lam_i > cutoff, else 0) U'.
    Vector inv_sqrt = Vector::Zero(p);
    for (int i = 0; i < p; ++i) {
        if (lam[i] > cutoff) inv_sqrt[i] = 1.0 / std::sqrt(lam[i]);
    }
    const Matrix root = eig.eigenvectors() * inv_sqrt.asDiagonal() *
                        eig.eigenvectors().transpose();

    StudentTParams st{Vector::Zero(p), Matrix::Identity(p, p), nu};
    const Matrix V = sample_student_t(st, T_n, rng);
    return root * V;
}

Matrix normalize_rows(const Matrix& X) {
    const int p = static_cast<int>(X.rows());
    const int T = static_cast<int>(X.cols());
    Matrix Xn = X;
    for (int i = 0; i < p; ++i) {
        const double mean = Xn.row(i).mean();
        Xn.row(i).array() -= mean;
        const double sd = std::sqrt(Xn.row(i).squaredNorm() / T);
        if (sd > 0.0) Xn.row(i) /= sd;
    }
    return Xn;
}

FrameObservation corrupt(const Matrix& X, const SynthConfig& cfg, std::uint64_t seed) {
    const int p = static_cast<int>(X.rows());
    const int T = static_cast<int>(X.cols());
    const Matrix Xn = normalize_rows(X);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, cfg.noise_std);

    Matrix M(p, T);
    Matrix Y(p, T);
    for (int t = 0; t < T; ++t) {
        for (int i = 0; i < p; ++i) {
            const bool observed = unif(rng) < cfg.sampling_rate;
            M(i, t) = observed ? 1.0 : 0.0;
            const double n = cfg.noise_std > 0.0 ? noise(rng) : 0.0;
            Y(i, t) = observed ? Xn(i, t) + n : 0.0;
        }
    }
    return FrameObservation(std::move(Y), std::move(M));
}

std::vector<FrameObservation> SynthDataset::frames(int frame_length) const {
    std::vector<FrameObservation> out;
    const int N = static_cast<int>(Y.cols()) / frame_length;
    out.reserve(N);
    for (int n = 0; n < N; ++n) {
        out.emplace_back(Y.middleCols(n * frame_length, frame_length),
                         M.middleCols(n * frame_length, frame_length));
    }
    return out;
}

SynthDataset generate_dataset(const SynthConfig& cfg) {
    cfg.validate();
    const int N = cfg.frame_count();

    // Derived streams so that reordering one stage never shifts another.
    std::mt19937_64 evolve_rng(cfg.seed * 0x9E3779B97F4A7C15ULL + 1);
    std::mt19937_64 signal_rng(cfg.seed * 0x9E3779B97F4A7C15ULL + 2);

    EdgeWeights w = generate_initial_graph(cfg);
    // Put the ground truth on the unit-mean-degree scale used by the learner's
    // degree target d = 1. A single global factor keeps the VAR dynamics intact.
    const double total = w.values.sum();
    if (total <= 0.0) throw ValidationError("generate_dataset: initial graph is empty");
    const double scale = cfg.p / (2.0 * total);

    SynthDataset data;
    data.var_coefficients = draw_var_coefficients(cfg, evolve_rng);
    data.X.resize(cfg.p, cfg.T);
    data.true_weights.reserve(N);
    data.true_laplacians.reserve(N);

    for (int n = 0; n < N; ++n) {
        w = evolve_weights(w, data.var_coefficients, cfg, evolve_rng);
        EdgeWeights scaled(cfg.p, w.values * scale);
        data.X.middleCols(n * cfg.frame_length, cfg.frame_length) =
            sample_signals(scaled, cfg.frame_length, cfg.nu, signal_rng);
        data.true_laplacians.push_back(laplacian(scaled));
        data.true_weights.push_back(std::move(scaled));
    }

    // Normalize once up front; corrupt() re-normalizes, which is a no-op on
    // already centered unit-variance rows.
    data.X = normalize_rows(data.X);
    FrameObservation obs = corrupt(data.X, cfg, cfg.seed * 0x9E3779B97F4A7C15ULL + 3);
    data.Y = std::move(obs.Y);
    data.M = std::move(obs.M);
    return data;
}

}  // namespace tvgl
