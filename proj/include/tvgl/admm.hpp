#pragma once

#include <vector>

#include "tvgl/types.hpp"

namespace tvgl {

/// Solver hyperparameters for one frame length T_n. alpha, beta, gamma are
/// derived from (sigma_eps, lambda, frame_length) at construction:
///   alpha = 2 / (T_n sigma_eps), beta = 2 log(sigma_eps) / T_n,
///   gamma = 2 lambda / T_n.
/// sigma_eps < 1 is rejected: it would make beta negative and reward dense
/// graphs instead of sparse ones.
struct HyperParams {
    int k = 1;
    Vector d;
    double nu = 3.0;
    double sigma_eps = 1.0;
    double sigma_n = 0.0;
    double lambda = 1.0;
    double rho = 3.0;
    double eta = 1.5;
    int max_iter = 1000;
    double tol = 1e-4;
    int frame_length = 200;
    int overlap = 0;

    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    HyperParams(int k_, Vector d_, double nu_, double sigma_eps_, double sigma_n_,
                double lambda_, double rho_, int frame_length_, int overlap_ = 0,
                double eta_ = -1.0, int max_iter_ = 1000, double tol_ = 1e-4);

    int node_count() const { return static_cast<int>(d.size()); }

    /// Copy with the temporal l1 penalty removed (alpha = 0); the ablation
    /// baseline used for benchmark comparisons.
    HyperParams without_temporal_term() const;
};

/// One frame of corrupted observations: Y holds the measured values with
/// zeros at unobserved slots, M is the binary sampling mask.
struct FrameObservation {
    Matrix Y;
    Matrix M;

    FrameObservation() = default;
    /// Validates the mask and zeroes unobserved entries of Y.
    FrameObservation(Matrix Y_, Matrix M_);
    /// Fully observed frame.
    static FrameObservation complete(Matrix Y_);

    int p() const { return static_cast<int>(Y.rows()); }
    int samples() const { return static_cast<int>(Y.cols()); }
    bool fully_observed() const;
};

/// All ADMM iterates for one frame.
struct SolverState {
    EdgeWeights w;
    Matrix X;
    Vector a;
    Vector u;
    Matrix L;
    Matrix V;
    Matrix Phi;
    Vector mu;
    Vector z;
    int iter = 0;
};

/// Output of one frame solve, with per-iteration diagnostics.
struct FrameResult {
    EdgeWeights w_hat;
    Matrix X_hat;
    Vector a_hat;
    std::vector<double> res_laplacian;  // ||Lw - L||_F / max(1, ||L||_F)
    std::vector<double> res_temporal;   // ||u - w + a.*w_prev|| / max(1, ||w||)
    std::vector<double> res_degree;     // ||dw - d|| / ||d||
    std::vector<double> lagrangian_trace;
    int iters_used = 0;
    bool converged = false;
};

// Individual update steps. Each consumes the iterates it needs and returns
// the refreshed block; solve_frame wires them together in the order
// L -> w -> u -> X -> a -> V -> duals.

/// Closed-form rank-(p-k) update of the Laplacian block: eigen-decompose
/// Lw + Phi/rho, keep the p-k largest eigenpairs, and map each eigenvalue
/// g to (g + sqrt(g^2 + 4/rho)) / 2.
Matrix update_L(const EdgeWeights& w, const Matrix& Phi, double rho, int k);

/// Weighted scatter of the Student-t majorizer:
///   S = (p+nu)/T_n * sum_t x_t x_t' / (x_t' (Lw) x_t + nu).
Matrix weighted_scatter(const Matrix& X, const EdgeWeights& w, double nu, int T_n);

/// Majorized hard-threshold step for the edge weights.
EdgeWeights update_w(const SolverState& state, const Matrix& L_new,
                     const EdgeWeights& w_prev_frame, const HyperParams& hp);

/// Soft-threshold step for the temporal difference variable.
Vector update_u(const EdgeWeights& w_new, const Vector& a, const EdgeWeights& w_prev_frame,
                const Vector& mu, double alpha, double rho);

/// One majorization step on the denoised signal, column by column.
Matrix update_X(const SolverState& state, const FrameObservation& obs,
                const EdgeWeights& w_new, const HyperParams& hp);

/// Closed-form nonnegative soft-threshold step for the VAR coefficients.
Vector update_a(const EdgeWeights& w_new, const Vector& u_new, const Vector& mu,
                const EdgeWeights& w_prev_frame, double gamma, double rho);

/// Eigenvectors of Lw for the k smallest eigenvalues, ascending.
Matrix update_V(const EdgeWeights& w_new, int k);

struct DualUpdate {
    Matrix Phi;
    Vector mu;
    Vector z;
};

/// Gradient-ascent step on the three dual blocks.
DualUpdate update_duals(const SolverState& state, const EdgeWeights& w_new,
                        const Matrix& L_new, const Vector& u_new, const Vector& a_new,
                        const EdgeWeights& w_prev_frame, const Vector& d, double rho);

/// Full augmented Lagrangian at the given state.
double augmented_lagrangian(const SolverState& state, const FrameObservation& obs,
                            const EdgeWeights& w_prev_frame, const HyperParams& hp);

/// Largest eigenvalue by power iteration (50 steps, tol 1e-8).
double power_iteration_lmax(const Matrix& A, int steps = 50, double tol = 1e-8);

/// Run the per-frame ADMM to convergence or max_iter.
FrameResult solve_frame(const FrameObservation& obs, const EdgeWeights& w_prev_frame,
                        const HyperParams& hp);

/// Chain solve_frame over consecutive frames, warm-starting each frame from
/// the previous estimate. The first frame starts from w_init.
std::vector<FrameResult> solve_sequence(const std::vector<FrameObservation>& frames,
                                        const EdgeWeights& w_init, const HyperParams& hp);

/// Default first-frame warm start: a uniform complete graph scaled so the
/// average node degree matches the mean of d.
EdgeWeights default_initial_weights(const Vector& d);

}  // namespace tvgl
