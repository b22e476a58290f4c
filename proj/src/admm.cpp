#include "tvgl/admm.hpp"

#include <cmath>
#include <random>
#include <string>

#include "tvgl/errors.hpp"
#include "tvgl/graph_ops.hpp"

namespace tvgl {

HyperParams::HyperParams(int k_, Vector d_, double nu_, double sigma_eps_, double sigma_n_,
                         double lambda_, double rho_, int frame_length_, int overlap_,
                         double eta_, int max_iter_, double tol_)
    : k(k_),
      d(std::move(d_)),
      nu(nu_),
      sigma_eps(sigma_eps_),
      sigma_n(sigma_n_),
      lambda(lambda_),
      rho(rho_),
      eta(eta_),
      max_iter(max_iter_),
      tol(tol_),
      frame_length(frame_length_),
      overlap(overlap_) {
    const int p = node_count();
    if (p < 2) throw ValidationError("HyperParams: need at least 2 nodes");
    if (k < 1 || k > p - 1) throw ValidationError("HyperParams: k must lie in [1, p-1]");
    if ((d.array() < 0.0).any() || d.norm() == 0.0) {
        throw ValidationError("HyperParams: degree targets must be nonnegative and not all zero");
    }
    if (nu <= 2.0) throw ValidationError("HyperParams: nu must exceed 2");
    if (sigma_eps < 1.0) {
        throw ValidationError("HyperParams: sigma_eps below 1 would make the sparsity weight negative");
    }
    if (sigma_n < 0.0) throw ValidationError("HyperParams: sigma_n must be nonnegative");
    if (lambda <= 0.0) throw ValidationError("HyperParams: lambda must be positive");
    if (rho <= 0.0) throw ValidationError("HyperParams: rho must be positive");
    if (frame_length < 1) throw ValidationError("HyperParams: frame_length must be positive");
    if (overlap < 0 || overlap >= frame_length) {
        throw ValidationError("HyperParams: overlap must lie in [0, frame_length)");
    }
    if (max_iter < 1) throw ValidationError("HyperParams: max_iter must be positive");
    if (!(tol > 0.0)) throw ValidationError("HyperParams: tol must be positive");
    if (eta < 0.0) eta = 0.5 * rho;

    const double T_n = static_cast<double>(frame_length);
    alpha = 2.0 / (T_n * sigma_eps);
    beta = 2.0 * std::log(sigma_eps) / T_n;
    gamma = 2.0 * lambda / T_n;
}

HyperParams HyperParams::without_temporal_term() const {
    HyperParams hp = *this;
    hp.alpha = 0.0;
    return hp;
}

FrameObservation::FrameObservation(Matrix Y_, Matrix M_) : Y(std::move(Y_)), M(std::move(M_)) {
    if (Y.rows() != M.rows() || Y.cols() != M.cols()) {
        throw ValidationError("FrameObservation: mask shape mismatch");
    }
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            const double m = M(i, j);
            if (m != 0.0 && m != 1.0) {
                throw ValidationError("FrameObservation: mask entries must be 0 or 1 (row " +
                                      std::to_string(i) + ", column " + std::to_string(j) + ")");
            }
            if (m == 0.0) Y(i, j) = 0.0;
        }
    }
}

FrameObservation FrameObservation::complete(Matrix Y_) {
    Matrix ones = Matrix::Ones(Y_.rows(), Y_.cols());
    return FrameObservation(std::move(Y_), std::move(ones));
}

bool FrameObservation::fully_observed() const {
    return (M.array() == 1.0).all();
}

Matrix update_L(const EdgeWeights& w, const Matrix& Phi, double rho, int k) {
    const int p = w.p;
    const Matrix B = laplacian(w) + Phi / rho;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(B);
    // Largest p-k eigenpairs; eigenvalues come out ascending.
    const int keep = p - k;
    Matrix L = Matrix::Zero(p, p);
    for (int i = p - keep; i < p; ++i) {
        const double g = eig.eigenvalues()[i];
        const double mapped = 0.5 * (g + std::sqrt(g * g + 4.0 / rho));
        L.noalias() += mapped * eig.eigenvectors().col(i) * eig.eigenvectors().col(i).transpose();
    }
    return 0.5 * (L + L.transpose());
}

Matrix weighted_scatter(const Matrix& X, const EdgeWeights& w, double nu, int T_n) {
    const int p = static_cast<int>(X.rows());
    const int T = static_cast<int>(X.cols());
    const Matrix Lmat = laplacian(w);
    const Matrix LX = Lmat * X;
    Matrix S = Matrix::Zero(p, p);
    for (int t = 0; t < T; ++t) {
        const double q = X.col(t).dot(LX.col(t)) + nu;
        S.noalias() += X.col(t) * X.col(t).transpose() / q;
    }
    return S * ((p + nu) / static_cast<double>(T_n));
}

EdgeWeights update_w(const SolverState& state, const Matrix& L_new,
                     const EdgeWeights& w_prev_frame, const HyperParams& hp) {
    const int p = state.w.p;
    const double rho = hp.rho;
    const Matrix Lw = laplacian(state.w);

    const Matrix S = weighted_scatter(state.X, state.w, hp.nu, hp.frame_length);
    const Matrix lap_arg =
        S + state.Phi + rho * (Lw - L_new) + hp.eta * state.V * state.V.transpose();
    const Vector g_L = laplacian_adjoint(lap_arg);

    const Vector dw = degree(state.w);
    const Vector g_d = -state.mu - rho * (state.u + state.a.cwiseProduct(w_prev_frame.values)) +
                       degree_adjoint(state.z - rho * (hp.d - dw));

    const double denom = rho * (4.0 * p - 1.0);
    Vector c = (1.0 - 1.0 / (4.0 * p - 1.0)) * state.w.values - (g_L + g_d) / denom;

    const double c_th = std::sqrt(2.0 * hp.beta / denom);
    Vector out = Vector::Zero(c.size());
    for (Eigen::Index e = 0; e < c.size(); ++e) {
        if (c[e] > c_th) out[e] = c[e];
    }
    // The hard threshold already removes negatives whenever c_th >= 0; the
    // max is the projection onto w >= 0 kept explicit.
    out = out.cwiseMax(0.0);
    return EdgeWeights(p, std::move(out));
}

Vector update_u(const EdgeWeights& w_new, const Vector& a, const EdgeWeights& w_prev_frame,
                const Vector& mu, double alpha, double rho) {
    const Vector v = w_new.values - a.cwiseProduct(w_prev_frame.values) - mu / rho;
    const double thr = alpha / rho;
    Vector out(v.size());
    for (Eigen::Index e = 0; e < v.size(); ++e) {
        const double mag = std::abs(v[e]) - thr;
        out[e] = mag > 0.0 ? (v[e] > 0.0 ? mag : -mag) : 0.0;
    }
    return out;
}

Matrix update_X(const SolverState& state, const FrameObservation& obs,
                const EdgeWeights& w_new, const HyperParams& hp) {
    if (hp.sigma_n == 0.0) {
        throw ValidationError("update_X: sigma_n = 0 disables denoising; X must stay at Y");
    }
    const int p = obs.p();
    const int T = obs.samples();
    const double inv_var = 1.0 / (hp.sigma_n * hp.sigma_n);
    const Matrix Lmat = laplacian(w_new);
    const double lmax = power_iteration_lmax(Lmat);
    const Matrix LX = Lmat * state.X;

    Matrix out(p, T);
    for (int t = 0; t < T; ++t) {
        const double q = state.X.col(t).dot(LX.col(t)) + hp.nu;
        const double scale = (p + hp.nu) / q;
        const double tau = inv_var + scale * lmax;
        const Vector Qx =
            inv_var * obs.M.col(t).cwiseProduct(state.X.col(t)) + scale * LX.col(t);
        out.col(t) = state.X.col(t) - (Qx - inv_var * obs.Y.col(t)) / tau;
    }
    return out;
}

Vector update_a(const EdgeWeights& w_new, const Vector& u_new, const Vector& mu,
                const EdgeWeights& w_prev_frame, double gamma, double rho) {
    const Vector f = w_new.values - u_new - mu / rho;
    Vector out = Vector::Zero(f.size());
    for (Eigen::Index e = 0; e < f.size(); ++e) {
        const double wp = w_prev_frame.values[e];
        if (wp <= 0.0) continue;
        const double thr = gamma / (rho * wp * wp);
        const double v = std::max(f[e], 0.0) / wp;
        out[e] = std::max(v - thr, 0.0);
    }
    return out;
}

Matrix update_V(const EdgeWeights& w_new, int k) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(laplacian(w_new));
    return eig.eigenvectors().leftCols(k);
}

DualUpdate update_duals(const SolverState& state, const EdgeWeights& w_new,
                        const Matrix& L_new, const Vector& u_new, const Vector& a_new,
                        const EdgeWeights& w_prev_frame, const Vector& d, double rho) {
    DualUpdate duals;
    duals.Phi = state.Phi + rho * (laplacian(w_new) - L_new);
    duals.mu =
        state.mu + rho * (u_new - w_new.values + a_new.cwiseProduct(w_prev_frame.values));
    duals.z = state.z + rho * (degree(w_new) - d);
    return duals;
}

namespace {

// Sum of logs of the p-k largest eigenvalues of the rank-(p-k) block.
double logdet_star(const Matrix& L, int k) {
    const int p = static_cast<int>(L.rows());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(L);
    double s = 0.0;
    for (int i = k; i < p; ++i) {
        s += std::log(std::max(eig.eigenvalues()[i], 1e-300));
    }
    return s;
}

}  // namespace

double augmented_lagrangian(const SolverState& state, const FrameObservation& obs,
                            const EdgeWeights& w_prev_frame, const HyperParams& hp) {
    const int p = obs.p();
    const int T = obs.samples();
    const Matrix Lw = laplacian(state.w);
    const int k = hp.k;

    double f = -logdet_star(state.L, k);
    f += hp.alpha * state.u.lpNorm<1>();
    f += hp.beta * static_cast<double>((state.w.values.array() != 0.0).count());

    const Matrix LX = Lw * state.X;
    double t_term = 0.0;
    for (int t = 0; t < T; ++t) {
        t_term += std::log1p(state.X.col(t).dot(LX.col(t)) / hp.nu);
    }
    f += (hp.nu + p) / static_cast<double>(hp.frame_length) * t_term;

    if (hp.sigma_n > 0.0) {
        const Matrix resid = obs.Y - obs.M.cwiseProduct(state.X);
        f += resid.squaredNorm() / (hp.frame_length * hp.sigma_n * hp.sigma_n);
    }

    f += hp.gamma * state.a.sum();
    f += hp.eta * (state.V.transpose() * Lw * state.V).trace();

    const Matrix R_L = Lw - state.L;
    const Vector r_u = state.u - state.w.values + state.a.cwiseProduct(w_prev_frame.values);
    const Vector r_d = degree(state.w) - hp.d;

    double penalty = 0.5 * hp.rho * R_L.squaredNorm() + (R_L.cwiseProduct(state.Phi)).sum();
    penalty += 0.5 * hp.rho * r_u.squaredNorm() + r_u.dot(state.mu);
    penalty += 0.5 * hp.rho * r_d.squaredNorm() + r_d.dot(state.z);
    return f + penalty;
}

double power_iteration_lmax(const Matrix& A, int steps, double tol) {
    const int p = static_cast<int>(A.rows());
    // Deterministic pseudo-random start; the all-ones vector would sit in the
    // Laplacian nullspace.
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vector v(p);
    for (int i = 0; i < p; ++i) v[i] = unif(rng);
    v.normalize();

    double lam = 0.0;
    for (int s = 0; s < steps; ++s) {
        Vector Av = A * v;
        const double norm = Av.norm();
        if (norm == 0.0) return 0.0;
        Av /= norm;
        const double lam_new = Av.dot(A * Av);
        if (std::abs(lam_new - lam) <= tol * std::max(1.0, std::abs(lam_new))) {
            return lam_new;
        }
        lam = lam_new;
        v = std::move(Av);
    }
    return lam;
}

FrameResult solve_frame(const FrameObservation& obs, const EdgeWeights& w_prev_frame,
                        const HyperParams& hp) {
    const int p = hp.node_count();
    if (obs.p() != p) {
        throw ValidationError("solve_frame: observation has " + std::to_string(obs.p()) +
                              " nodes, hyperparameters expect " + std::to_string(p));
    }
    if (obs.samples() != hp.frame_length) {
        throw ValidationError("solve_frame: frame has " + std::to_string(obs.samples()) +
                              " samples, expected " + std::to_string(hp.frame_length));
    }
    if (w_prev_frame.p != p) {
        throw ValidationError("solve_frame: warm-start weights have wrong node count");
    }
    const bool noiseless = hp.sigma_n == 0.0;
    if (noiseless && !obs.fully_observed()) {
        throw ValidationError(
            "solve_frame: sigma_n = 0 with missing samples; imputation needs sigma_n > 0");
    }

    const int m = edge_count(p);
    SolverState state;
    state.w = w_prev_frame;
    state.X = obs.Y;
    state.a = Vector::Ones(m);
    state.u = state.w.values - state.a.cwiseProduct(w_prev_frame.values);
    state.V = update_V(state.w, hp.k);
    state.L = Matrix::Zero(p, p);
    state.Phi = Matrix::Zero(p, p);
    state.mu = Vector::Zero(m);
    state.z = Vector::Zero(p);

    FrameResult result;
    const double d_norm = hp.d.norm();

    for (int l = 0; l < hp.max_iter; ++l) {
        const Matrix L_new = update_L(state.w, state.Phi, hp.rho, hp.k);
        EdgeWeights w_new = update_w(state, L_new, w_prev_frame, hp);
        const Vector u_new = update_u(w_new, state.a, w_prev_frame, state.mu, hp.alpha, hp.rho);
        Matrix X_new = noiseless ? state.X : update_X(state, obs, w_new, hp);
        const Vector a_new = update_a(w_new, u_new, state.mu, w_prev_frame, hp.gamma, hp.rho);
        Matrix V_new = update_V(w_new, hp.k);
        DualUpdate duals = update_duals(state, w_new, L_new, u_new, a_new, w_prev_frame,
                                        hp.d, hp.rho);

        state.w = std::move(w_new);
        state.u = u_new;
        state.X = std::move(X_new);
        state.a = a_new;
        state.L = L_new;
        state.V = std::move(V_new);
        state.Phi = std::move(duals.Phi);
        state.mu = std::move(duals.mu);
        state.z = std::move(duals.z);
        state.iter = l + 1;

        if (!state.w.values.allFinite() || !state.X.allFinite() || !state.mu.allFinite()) {
            throw NumericalError("solve_frame: non-finite iterate at iteration " +
                                 std::to_string(l + 1));
        }

        const double r_lap = (laplacian(state.w) - state.L).norm() /
                             std::max(1.0, state.L.norm());
        const double r_tmp =
            (state.u - state.w.values + state.a.cwiseProduct(w_prev_frame.values)).norm() /
            std::max(1.0, state.w.values.norm());
        const double r_deg = (degree(state.w) - hp.d).norm() / d_norm;

        result.res_laplacian.push_back(r_lap);
        result.res_temporal.push_back(r_tmp);
        result.res_degree.push_back(r_deg);
        result.lagrangian_trace.push_back(
            augmented_lagrangian(state, obs, w_prev_frame, hp));

        if (r_lap < hp.tol && r_tmp < hp.tol && r_deg < hp.tol) {
            result.converged = true;
            break;
        }
    }

    result.iters_used = state.iter;
    result.w_hat = std::move(state.w);
    result.X_hat = std::move(state.X);
    result.a_hat = std::move(state.a);
    return result;
}

std::vector<FrameResult> solve_sequence(const std::vector<FrameObservation>& frames,
                                        const EdgeWeights& w_init, const HyperParams& hp) {
    if (frames.empty()) throw ValidationError("solve_sequence: no frames given");
    std::vector<FrameResult> results;
    results.reserve(frames.size());
    const EdgeWeights* w_prev = &w_init;
    for (std::size_t n = 0; n < frames.size(); ++n) {
        try {
            results.push_back(solve_frame(frames[n], *w_prev, hp));
        } catch (const ValidationError& err) {
            throw ValidationError("frame " + std::to_string(n + 1) + ": " + err.what());
        } catch (const NumericalError& err) {
            throw NumericalError("frame " + std::to_string(n + 1) + ": " + err.what());
        }
        w_prev = &results.back().w_hat;
    }
    return results;
}

EdgeWeights default_initial_weights(const Vector& d) {
    const int p = static_cast<int>(d.size());
    const double c = d.mean() / (p - 1);
    return EdgeWeights::constant(p, c);
}

}  // namespace tvgl
