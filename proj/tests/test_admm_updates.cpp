#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "tvgl/admm.hpp"
#include "tvgl/errors.hpp"
#include "tvgl/graph_ops.hpp"

using namespace tvgl;

namespace {

std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

EdgeWeights random_weights(int p, std::mt19937_64& rng, double zero_fraction = 0.2) {
    std::uniform_real_distribution<double> unif(0.1, 2.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    Vector v(edge_count(p));
    for (Eigen::Index e = 0; e < v.size(); ++e) {
        v[e] = coin(rng) < zero_fraction ? 0.0 : unif(rng);
    }
    return EdgeWeights(p, v);
}

Vector random_vector(int n, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
    return v;
}

Matrix random_matrix(int rows, int cols, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Matrix A(rows, cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) A(i, j) = normal(rng);
    }
    return A;
}

Matrix random_symmetric(int p, std::mt19937_64& rng, double scale = 1.0) {
    const Matrix A = random_matrix(p, p, rng, scale);
    return 0.5 * (A + A.transpose());
}

HyperParams small_hp(int p, int T_n, double sigma_n = 0.0) {
    return HyperParams(/*k=*/1, Vector::Ones(p), /*nu=*/3.0,
                       /*sigma_eps=*/std::exp(0.005 * T_n), sigma_n,
                       /*lambda=*/1.0, /*rho=*/3.0, T_n);
}

SolverState random_state(int p, int T_n, std::mt19937_64& rng) {
    const int m = edge_count(p);
    SolverState s;
    s.w = random_weights(p, rng);
    s.X = random_matrix(p, T_n, rng);
    s.a = random_vector(m, rng).cwiseAbs();
    s.u = random_vector(m, rng, 0.5);
    s.L = update_L(s.w, Matrix::Zero(p, p), 3.0, 1);
    s.V = update_V(s.w, 1);
    s.Phi = random_symmetric(p, rng, 0.3);
    s.mu = random_vector(m, rng, 0.3);
    s.z = random_vector(p, rng, 0.3);
    return s;
}

// Golden-section search for a unimodal scalar function on [lo, hi].
double golden_min(const std::function<double(double)>& f, double lo, double hi) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    for (int it = 0; it < 200; ++it) {
        const double c = b - phi * (b - a);
        const double d = a + phi * (b - a);
        if (f(c) < f(d)) {
            b = d;
        } else {
            a = c;
        }
    }
    return 0.5 * (a + b);
}

double x_objective(const Vector& x, const Vector& y, const Vector& m, const Matrix& L,
                   double sigma_n, double nu, int T_n) {
    const int p = static_cast<int>(x.size());
    const double fid = (y - m.cwiseProduct(x)).squaredNorm() / (T_n * sigma_n * sigma_n);
    return fid + (p + nu) / T_n * std::log1p(x.dot(L * x) / nu);
}

}  // namespace

TEST_CASE("update_L on the worked 2-node example") {
    EdgeWeights w = EdgeWeights::zeros(2);
    w(0, 1) = 1.0;  // Laplacian [[1,-1],[-1,1]], eigenvalues {0, 2}
    const Matrix L = update_L(w, Matrix::Zero(2, 2), /*rho=*/2.0, /*k=*/1);
    const double mapped = 0.5 * (2.0 + std::sqrt(6.0));
    Matrix expect(2, 2);
    expect << mapped / 2, -mapped / 2, -mapped / 2, mapped / 2;  // eigvec (1,-1)/sqrt(2)
    CHECK((L - expect).norm() < 1e-12);
}

TEST_CASE("update_L maps a zero eigenvalue to one at rho = 1") {
    // gamma = 0 maps to (0 + sqrt(0 + 4))/2 = 1.
    const EdgeWeights w = EdgeWeights::zeros(3);  // all eigenvalues zero
    const Matrix L = update_L(w, Matrix::Zero(3, 3), /*rho=*/1.0, /*k=*/1);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(L);
    CHECK(eig.eigenvalues()[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eig.eigenvalues()[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eig.eigenvalues()[0] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("update_L eigenvalue map matches the scalar minimization oracle") {
    auto rng = make_rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const int p = 5;
        const int k = 2;
        const EdgeWeights w = random_weights(p, rng);
        const Matrix Phi = random_symmetric(p, rng, 0.5);
        const double rho = 0.5 + 3.0 * trial / 200.0;

        const Matrix B = laplacian(w) + Phi / rho;
        Eigen::SelfAdjointEigenSolver<Matrix> eig_B(B);
        const Matrix L = update_L(w, Phi, rho, k);
        Eigen::SelfAdjointEigenSolver<Matrix> eig_L(L);

        // Each kept eigenvalue solves min_x -log x + rho/2 (x - g)^2.
        for (int i = k; i < p; ++i) {
            const double g = eig_B.eigenvalues()[i];
            auto obj = [&](double x) { return -std::log(x) + 0.5 * rho * (x - g) * (x - g); };
            const double oracle = golden_min(obj, 1e-6, std::abs(g) + 10.0);
            const double mapped = eig_L.eigenvalues()[i];
            CHECK(mapped == doctest::Approx(oracle).epsilon(1e-6));
        }
        // Rank constraint: the k smallest eigenvalues vanish.
        for (int i = 0; i < k; ++i) {
            CHECK(std::abs(eig_L.eigenvalues()[i]) < 1e-9);
        }
    }
}

TEST_CASE("weighted_scatter single-sample example") {
    EdgeWeights w = EdgeWeights::zeros(2);
    Matrix X(2, 1);
    X << 1.0, 0.0;  // x = e_1
    const Matrix S = weighted_scatter(X, w, /*nu=*/3.0, /*T_n=*/1);
    Matrix expect = Matrix::Zero(2, 2);
    expect(0, 0) = 5.0 / 3.0;
    CHECK((S - expect).norm() < 1e-14);

    CHECK(weighted_scatter(Matrix::Zero(2, 4), w, 3.0, 4).norm() == 0.0);
}

TEST_CASE("weighted_scatter matches the naive summation oracle") {
    auto rng = make_rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        const int p = 4, T = 6;
        const EdgeWeights w = random_weights(p, rng);
        const Matrix X = random_matrix(p, T, rng);
        const double nu = 3.5;

        const Matrix L = laplacian(w);
        Matrix oracle = Matrix::Zero(p, p);
        for (int t = 0; t < T; ++t) {
            const Vector x = X.col(t);
            oracle += x * x.transpose() / (x.dot(L * x) + nu);
        }
        oracle *= (p + nu) / T;
        CHECK((weighted_scatter(X, w, nu, T) - oracle).lpNorm<Eigen::Infinity>() < 1e-12);
    }
}

namespace {

// Independent evaluation of the w-subproblem objective the majorized step is
// minimizing (up to additive constants).
double w_subproblem_objective(const EdgeWeights& w, const SolverState& s,
                              const Matrix& L_new, const EdgeWeights& w_prev,
                              const HyperParams& hp) {
    const int p = w.p;
    const Matrix Lw = laplacian(w);
    double g = 0.0;
    for (int t = 0; t < s.X.cols(); ++t) {
        g += std::log1p(s.X.col(t).dot(Lw * s.X.col(t)) / hp.nu);
    }
    g *= (p + hp.nu) / hp.frame_length;
    g += hp.beta * static_cast<double>((w.values.array() != 0.0).count());
    g += 0.5 * hp.rho * (Lw - L_new + s.Phi / hp.rho).squaredNorm();
    g += 0.5 * hp.rho *
         (s.u - w.values + s.a.cwiseProduct(w_prev.values) + s.mu / hp.rho).squaredNorm();
    g += 0.5 * hp.rho * (degree(w) - hp.d + s.z / hp.rho).squaredNorm();
    g += hp.eta * (s.V.transpose() * Lw * s.V).trace();
    return g;
}

}  // namespace

TEST_CASE("hard threshold matches the scalar brute-force oracle") {
    auto rng = make_rng(41);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double kappa = 1.0 + 10.0 * std::abs(unif(rng));  // rho (4p-1)
        const double beta = trial % 5 == 0 ? 0.0 : 0.05 * std::abs(unif(rng));
        const double c = unif(rng);
        const double c_th = std::sqrt(2.0 * beta / kappa);
        const double ours = c > c_th ? c : 0.0;

        auto obj = [&](double w) {
            return 0.5 * kappa * (w - c) * (w - c) + (w != 0.0 ? beta : 0.0);
        };
        double best_w = 0.0;
        double best = obj(0.0);
        for (int i = 1; i <= 4000; ++i) {
            const double w = 2.0 * i / 4000.0;
            if (obj(w) < best) {
                best = obj(w);
                best_w = w;
            }
        }
        CHECK(std::abs(ours - best_w) < 1e-3);  // grid resolution
        CHECK(obj(ours) <= best + 1e-12);       // never worse than the grid
    }
}

TEST_CASE("update_w with beta = 0 reduces to a nonnegative projection of c") {
    auto rng = make_rng(43);
    const int p = 4, T = 8;
    SolverState s = random_state(p, T, rng);
    HyperParams hp(1, Vector::Ones(p), 3.0, 1.0 /*sigma_eps=1 -> beta=0*/, 0.0, 1.0, 3.0, T);
    REQUIRE(hp.beta == 0.0);
    const Matrix L_new = update_L(s.w, s.Phi, hp.rho, hp.k);
    const EdgeWeights w_prev = random_weights(p, rng);

    // Reassemble c independently from the printed formula.
    const Matrix S = weighted_scatter(s.X, s.w, hp.nu, hp.frame_length);
    const Vector g_L = laplacian_adjoint(S + s.Phi + hp.rho * (laplacian(s.w) - L_new) +
                                         hp.eta * s.V * s.V.transpose());
    const Vector g_d = -s.mu - hp.rho * (s.u + s.a.cwiseProduct(w_prev.values)) +
                       degree_adjoint(s.z - hp.rho * (hp.d - degree(s.w)));
    const Vector c = (1.0 - 1.0 / (4.0 * p - 1.0)) * s.w.values -
                     (g_L + g_d) / (hp.rho * (4.0 * p - 1.0));

    const EdgeWeights w_new = update_w(s, L_new, w_prev, hp);
    CHECK((w_new.values - c.cwiseMax(0.0)).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("update_w never increases the subproblem objective") {
    auto rng = make_rng(47);
    for (int trial = 0; trial < 25; ++trial) {
        const int p = 4, T = 8;
        SolverState s = random_state(p, T, rng);
        const HyperParams hp = small_hp(p, T);
        const EdgeWeights w_prev = random_weights(p, rng);
        const Matrix L_new = update_L(s.w, s.Phi, hp.rho, hp.k);

        const EdgeWeights w_new = update_w(s, L_new, w_prev, hp);
        const double before = w_subproblem_objective(s.w, s, L_new, w_prev, hp);
        const double after = w_subproblem_objective(w_new, s, L_new, w_prev, hp);
        CHECK(after <= before + 1e-10 * std::abs(before));
        CHECK((w_new.values.array() >= 0.0).all());
    }
}

TEST_CASE("update_u soft threshold on the worked scalars") {
    // v = 2.5, threshold 1 -> 1.5; v = -0.5 -> 0.
    EdgeWeights w_new = EdgeWeights::zeros(2);
    w_new(0, 1) = 2.5;
    EdgeWeights w_prev = EdgeWeights::zeros(2);
    Vector a = Vector::Zero(1), mu = Vector::Zero(1);
    Vector u = update_u(w_new, a, w_prev, mu, /*alpha=*/1.0, /*rho=*/1.0);
    CHECK(u[0] == doctest::Approx(1.5));

    mu[0] = 0.5;  // v = 0 - 0 - 0.5 = -0.5
    w_new(0, 1) = 0.0;
    u = update_u(w_new, a, w_prev, mu, 1.0, 1.0);
    CHECK(u[0] == 0.0);
}

TEST_CASE("update_u matches the scalar prox oracle") {
    auto rng = make_rng(53);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double v = unif(rng);
        const double alpha = std::abs(unif(rng));
        const double rho = 0.5 + std::abs(unif(rng));

        EdgeWeights w_new = EdgeWeights::zeros(2);
        EdgeWeights w_prev = EdgeWeights::zeros(2);
        Vector a = Vector::Zero(1);
        Vector mu = Vector::Constant(1, -v * rho);  // v = -mu/rho
        const double ours = update_u(w_new, a, w_prev, mu, alpha, rho)[0];

        auto obj = [&](double u) { return 0.5 * rho * (u - v) * (u - v) + alpha * std::abs(u); };
        const double oracle = golden_min(obj, -3.0, 3.0);
        CHECK(std::abs(ours - oracle) < 1e-6);
    }
}

TEST_CASE("update_X fixes the observation when the graph is empty") {
    auto rng = make_rng(59);
    const int p = 3, T = 5;
    SolverState s;
    s.w = EdgeWeights::zeros(p);
    s.X = random_matrix(p, T, rng);
    Matrix Y = random_matrix(p, T, rng);
    FrameObservation obs = FrameObservation::complete(Y);
    HyperParams hp = small_hp(p, T, /*sigma_n=*/0.7);
    const Matrix X_new = update_X(s, obs, s.w, hp);
    CHECK((X_new - Y).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("update_X leaves a stationary point unchanged") {
    // If Q_t x = y / sigma_n^2 for every column the step is zero.
    auto rng = make_rng(61);
    const int p = 4, T = 3;
    const EdgeWeights w = random_weights(p, rng, 0.0);
    const double sigma_n = 0.5;
    HyperParams hp = small_hp(p, T, sigma_n);
    const Matrix L = laplacian(w);

    SolverState s;
    s.w = w;
    s.X.resize(p, T);
    Matrix Y(p, T);
    for (int t = 0; t < T; ++t) {
        const Vector x = random_vector(p, rng);
        const double q = x.dot(L * x) + hp.nu;
        const Matrix Q = Matrix::Identity(p, p) / (sigma_n * sigma_n) + (p + hp.nu) / q * L;
        s.X.col(t) = x;
        Y.col(t) = (sigma_n * sigma_n) * (Q * x);
    }
    FrameObservation obs = FrameObservation::complete(Y);
    const Matrix X_new = update_X(s, obs, w, hp);
    CHECK((X_new - s.X).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("update_X never increases the per-column objective") {
    auto rng = make_rng(67);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const int p = 5, T = 4;
        const EdgeWeights w = random_weights(p, rng);
        const double sigma_n = 0.4;
        HyperParams hp = small_hp(p, T, sigma_n);

        Matrix M(p, T), Y(p, T);
        for (int t = 0; t < T; ++t) {
            for (int i = 0; i < p; ++i) {
                M(i, t) = coin(rng) < 0.7 ? 1.0 : 0.0;
                Y(i, t) = M(i, t) * random_vector(1, rng)[0];
            }
        }
        FrameObservation obs(Y, M);

        SolverState s;
        s.w = w;
        s.X = random_matrix(p, T, rng);
        const Matrix X_new = update_X(s, obs, w, hp);
        const Matrix L = laplacian(w);
        for (int t = 0; t < T; ++t) {
            const double before =
                x_objective(s.X.col(t), obs.Y.col(t), obs.M.col(t), L, sigma_n, hp.nu, T);
            const double after =
                x_objective(X_new.col(t), obs.Y.col(t), obs.M.col(t), L, sigma_n, hp.nu, T);
            CHECK(after <= before + 1e-10 * std::abs(before));
        }
    }
}

TEST_CASE("update_X refuses to impute without a noise model") {
    SolverState s;
    s.w = EdgeWeights::zeros(2);
    s.X = Matrix::Zero(2, 2);
    FrameObservation obs = FrameObservation::complete(Matrix::Zero(2, 2));
    HyperParams hp = small_hp(2, 2, 0.0);
    CHECK_THROWS_AS(update_X(s, obs, s.w, hp), ValidationError);
}

TEST_CASE("update_a on the worked example") {
    // w_prev = 2, f = 3, gamma/rho = 1 -> soft threshold at 1/4 of 3/2 -> 1.25.
    {
        EdgeWeights wp = EdgeWeights::zeros(2);
        wp(0, 1) = 2.0;
        EdgeWeights w_new = EdgeWeights::zeros(2);
        w_new(0, 1) = 3.0;  // f = w_new - u - mu/rho = 3
        const Vector a = update_a(w_new, Vector::Zero(1), Vector::Zero(1), wp,
                                  /*gamma=*/1.0, /*rho=*/1.0);
        CHECK(a[0] == doctest::Approx(1.25));
    }
    // Previous weight 0 pins the coefficient to 0 regardless of f.
    {
        EdgeWeights wp = EdgeWeights::zeros(2);
        EdgeWeights w_new = EdgeWeights::zeros(2);
        w_new(0, 1) = 5.0;
        const Vector a = update_a(w_new, Vector::Zero(1), Vector::Zero(1), wp, 1.0, 1.0);
        CHECK(a[0] == 0.0);
    }
}

TEST_CASE("update_a kills nonpositive inputs") {
    EdgeWeights wp = EdgeWeights::zeros(3);
    wp(0, 1) = 1.0;
    wp(0, 2) = 2.0;
    wp(1, 2) = 0.5;
    EdgeWeights w_new = EdgeWeights::zeros(3);
    Vector u(3);
    u << 1.0, 0.5, 2.0;  // f = -u < 0
    const Vector a = update_a(w_new, u, Vector::Zero(3), wp, 0.3, 2.0);
    CHECK(a.norm() == 0.0);
}

TEST_CASE("update_a matches the scalar KKT oracle") {
    auto rng = make_rng(73);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double wp = 0.1 + std::abs(unif(rng));
        const double f = unif(rng);
        const double gamma = 0.5 * std::abs(unif(rng));
        const double rho = 0.5 + std::abs(unif(rng));

        EdgeWeights w_prev = EdgeWeights::zeros(2);
        w_prev(0, 1) = wp;
        EdgeWeights w_new = EdgeWeights::zeros(2);
        Vector mu = Vector::Constant(1, -f * rho);  // f = w_new - u - mu/rho
        const double ours = update_a(w_new, Vector::Zero(1), mu, w_prev, gamma, rho)[0];

        auto obj = [&](double a) {
            return 0.5 * rho * (a * wp - f) * (a * wp - f) + gamma * a;
        };
        double best_a = 0.0, best = obj(0.0);
        for (int i = 1; i <= 40000; ++i) {
            const double a = 4.0 * i / 40000.0;
            if (obj(a) < best) {
                best = obj(a);
                best_a = a;
            }
        }
        CHECK(std::abs(ours - best_a) < 2e-4);
        CHECK(obj(ours) <= best + 1e-10);
    }
}

TEST_CASE("update_V spans the nullspace of a connected graph at k = 1") {
    auto rng = make_rng(79);
    const EdgeWeights w = random_weights(5, rng, 0.0);
    const Matrix V = update_V(w, 1);
    CHECK(V.rows() == 5);
    CHECK(V.cols() == 1);
    CHECK(std::abs(std::abs(V.col(0).sum()) - std::sqrt(5.0)) < 1e-8);  // +-1/sqrt(p)
}

TEST_CASE("update_V recovers component indicators on a 2-component graph") {
    EdgeWeights w = EdgeWeights::zeros(5);
    w(0, 1) = 1.0;
    w(1, 2) = 2.0;
    w(3, 4) = 1.5;
    const Matrix V = update_V(w, 2);
    const Matrix L = laplacian(w);
    CHECK((V.transpose() * V - Matrix::Identity(2, 2)).norm() < 1e-10);
    CHECK((V.transpose() * L * V).trace() < 1e-10);
}

TEST_CASE("update_V trace equals the sum of the k smallest eigenvalues") {
    auto rng = make_rng(83);
    for (int trial = 0; trial < 20; ++trial) {
        const int p = 6;
        const int k = 2;
        const EdgeWeights w = random_weights(p, rng);
        const Matrix V = update_V(w, k);
        const Matrix L = laplacian(w);
        Eigen::SelfAdjointEigenSolver<Matrix> eig(L);
        const double expect = eig.eigenvalues().head(k).sum();
        CHECK((V.transpose() * L * V).trace() == doctest::Approx(expect).epsilon(1e-8));
    }
}

TEST_CASE("dual updates vanish at feasibility and at rho = 0") {
    auto rng = make_rng(89);
    const int p = 4;
    SolverState s = random_state(p, 6, rng);
    const EdgeWeights w_prev = random_weights(p, rng);

    // Feasible point: L = Lw, u = w - a.*w_prev, d = dw.
    const EdgeWeights w_new = s.w;
    const Matrix L_new = laplacian(w_new);
    const Vector a_new = s.a;
    const Vector u_new = w_new.values - a_new.cwiseProduct(w_prev.values);
    const Vector d = degree(w_new);

    DualUpdate at_feasible = update_duals(s, w_new, L_new, u_new, a_new, w_prev, d, 3.0);
    CHECK((at_feasible.Phi - s.Phi).norm() < 1e-12);
    CHECK((at_feasible.mu - s.mu).norm() < 1e-12);
    CHECK((at_feasible.z - s.z).norm() < 1e-12);

    DualUpdate at_zero_rho = update_duals(s, w_new, update_L(s.w, s.Phi, 3.0, 1), s.u,
                                          a_new, w_prev, Vector::Ones(p), 0.0);
    CHECK((at_zero_rho.Phi - s.Phi).norm() == 0.0);
    CHECK((at_zero_rho.mu - s.mu).norm() == 0.0);
    CHECK((at_zero_rho.z - s.z).norm() == 0.0);
}

TEST_CASE("dual updates match the affine formula") {
    auto rng = make_rng(97);
    const int p = 4;
    SolverState s = random_state(p, 6, rng);
    const EdgeWeights w_prev = random_weights(p, rng);
    const EdgeWeights w_new = random_weights(p, rng);
    const Matrix L_new = update_L(w_new, s.Phi, 2.0, 1);
    const Vector u_new = random_vector(edge_count(p), rng);
    const Vector a_new = random_vector(edge_count(p), rng).cwiseAbs();
    const Vector d = Vector::Ones(p);
    const double rho = 2.0;

    DualUpdate duals = update_duals(s, w_new, L_new, u_new, a_new, w_prev, d, rho);
    CHECK((duals.Phi - (s.Phi + rho * (laplacian(w_new) - L_new))).norm() < 1e-12);
    CHECK((duals.mu - (s.mu + rho * (u_new - w_new.values +
                                     a_new.cwiseProduct(w_prev.values)))).norm() < 1e-12);
    CHECK((duals.z - (s.z + rho * (degree(w_new) - d))).norm() < 1e-12);
}

namespace {

// Term-by-term re-evaluation of the augmented Lagrangian, deliberately close
// to the written formula rather than the production arrangement.
double lagrangian_oracle(const SolverState& s, const FrameObservation& obs,
                         const EdgeWeights& w_prev, const HyperParams& hp) {
    const int p = obs.p();
    const Matrix Lw = laplacian(s.w);

    Eigen::SelfAdjointEigenSolver<Matrix> eig(s.L);
    double logdet = 0.0;
    for (int i = hp.k; i < p; ++i) logdet += std::log(eig.eigenvalues()[i]);

    double f = -logdet;
    f += hp.alpha * s.u.cwiseAbs().sum();
    int nnz = 0;
    for (Eigen::Index e = 0; e < s.w.values.size(); ++e) {
        if (s.w.values[e] != 0.0) ++nnz;
    }
    f += hp.beta * nnz;
    for (int t = 0; t < obs.samples(); ++t) {
        f += (hp.nu + p) / hp.frame_length *
             std::log(1.0 + s.X.col(t).dot(Lw * s.X.col(t)) / hp.nu);
    }
    if (hp.sigma_n > 0.0) {
        f += (obs.Y - obs.M.cwiseProduct(s.X)).squaredNorm() /
             (hp.frame_length * hp.sigma_n * hp.sigma_n);
    }
    f += hp.gamma * s.a.sum();
    f += hp.eta * (Lw * s.V * s.V.transpose()).trace();

    const Matrix RL = Lw - s.L;
    const Vector ru = s.u - s.w.values + s.a.cwiseProduct(w_prev.values);
    const Vector rd = degree(s.w) - hp.d;
    f += 0.5 * hp.rho * RL.squaredNorm() + RL.cwiseProduct(s.Phi).sum();
    f += 0.5 * hp.rho * ru.squaredNorm() + ru.dot(s.mu);
    f += 0.5 * hp.rho * rd.squaredNorm() + rd.dot(s.z);
    return f;
}

}  // namespace

TEST_CASE("augmented lagrangian equals f at feasibility with zero duals") {
    auto rng = make_rng(101);
    const int p = 4, T = 6;
    SolverState s = random_state(p, T, rng);
    // Connected support keeps logdet* consistent between both evaluations.
    s.w = random_weights(p, rng, 0.0);
    const EdgeWeights w_prev = random_weights(p, rng);

    s.L = laplacian(s.w);
    s.u = s.w.values - s.a.cwiseProduct(w_prev.values);
    s.Phi.setZero();
    s.mu.setZero();
    s.z.setZero();

    HyperParams hp(1, degree(s.w), 3.0, std::exp(0.005 * T), 0.3, 1.0, 3.0, T);
    FrameObservation obs = FrameObservation::complete(s.X * 0.5);

    const double al = augmented_lagrangian(s, obs, w_prev, hp);
    const double oracle = lagrangian_oracle(s, obs, w_prev, hp);
    CHECK(al == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("doubling Phi with fixed residual shifts the lagrangian by <R, Phi>") {
    auto rng = make_rng(103);
    const int p = 4, T = 5;
    SolverState s = random_state(p, T, rng);
    const EdgeWeights w_prev = random_weights(p, rng);
    HyperParams hp = small_hp(p, T, 0.2);
    FrameObservation obs = FrameObservation::complete(s.X);

    const double before = augmented_lagrangian(s, obs, w_prev, hp);
    const Matrix R = laplacian(s.w) - s.L;
    SolverState doubled = s;
    doubled.Phi = 2.0 * s.Phi;
    const double after = augmented_lagrangian(doubled, obs, w_prev, hp);
    CHECK(after - before == doctest::Approx(R.cwiseProduct(s.Phi).sum()).epsilon(1e-9));
}

TEST_CASE("augmented lagrangian matches the independent oracle on random states") {
    auto rng = make_rng(107);
    for (int trial = 0; trial < 20; ++trial) {
        const int p = 5, T = 7;
        SolverState s = random_state(p, T, rng);
        const EdgeWeights w_prev = random_weights(p, rng);
        HyperParams hp = small_hp(p, T, 0.5);
        FrameObservation obs = FrameObservation::complete(random_matrix(p, T, rng));
        const double al = augmented_lagrangian(s, obs, w_prev, hp);
        const double oracle = lagrangian_oracle(s, obs, w_prev, hp);
        CHECK(al == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("log surrogate majorizes the t-term with equality at the anchor") {
    auto rng = make_rng(109);
    for (int trial = 0; trial < 500; ++trial) {
        const int p = 4;
        const EdgeWeights w = random_weights(p, rng);
        const EdgeWeights w_anchor = random_weights(p, rng);
        const Vector x = random_vector(p, rng);
        const double nu = 3.0;

        const double q = x.dot(laplacian(w) * x);
        const double q0 = x.dot(laplacian(w_anchor) * x);
        const double lhs = std::log1p(q / nu);
        const double rhs = std::log1p(q0 / nu) + (q + nu) / (q0 + nu) - 1.0;
        CHECK(lhs <= rhs + 1e-10);

        const double at_anchor = std::log1p(q0 / nu) + (q0 + nu) / (q0 + nu) - 1.0;
        CHECK(at_anchor == doctest::Approx(std::log1p(q0 / nu)).epsilon(1e-12));
    }
}

TEST_CASE("quadratic surrogate majorizes the signal objective") {
    auto rng = make_rng(113);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const int p = 5;
        const int T_n = 3;
        const EdgeWeights w = random_weights(p, rng);
        const Matrix L = laplacian(w);
        const double nu = 3.0;
        const double sigma_n = 0.3 + coin(rng);

        Vector m(p);
        for (int i = 0; i < p; ++i) m[i] = coin(rng) < 0.7 ? 1.0 : 0.0;
        const Vector y = m.cwiseProduct(random_vector(p, rng));
        const Vector x0 = random_vector(p, rng);
        const Vector x = random_vector(p, rng, 2.0);

        auto f = [&](const Vector& v) { return x_objective(v, y, m, L, sigma_n, nu, T_n); };

        const double q0 = x0.dot(L * x0) + nu;
        const Matrix Q = Matrix(m.asDiagonal()) / (sigma_n * sigma_n) + (p + nu) / q0 * L;
        Eigen::SelfAdjointEigenSolver<Matrix> eigL(L);
        const double tau =
            1.0 / (sigma_n * sigma_n) + (p + nu) / q0 * eigL.eigenvalues()[p - 1];

        // tau dominates the curvature (Weyl bound).
        Eigen::SelfAdjointEigenSolver<Matrix> eigQ(Q);
        CHECK(tau >= eigQ.eigenvalues()[p - 1] - 1e-10);

        const Vector c = y / (sigma_n * sigma_n);
        auto quad = [&](const Vector& v) { return (v.dot(Q * v) - 2.0 * c.dot(v)) / T_n; };
        const double r = f(x0) - quad(x0);
        const double surrogate =
            quad(x) + (x - x0).dot((tau * Matrix::Identity(p, p) - Q) * (x - x0)) / T_n + r;

        CHECK(f(x) <= surrogate + 1e-10 * std::max(1.0, std::abs(surrogate)));
        CHECK(f(x0) == doctest::Approx(quad(x0) + r).epsilon(1e-12));
    }
}

TEST_CASE("power iteration agrees with the dense eigensolver") {
    auto rng = make_rng(127);
    for (int trial = 0; trial < 20; ++trial) {
        const int p = 6;
        const EdgeWeights w = random_weights(p, rng);
        const Matrix L = laplacian(w);
        Eigen::SelfAdjointEigenSolver<Matrix> eig(L);
        const double expect = eig.eigenvalues()[p - 1];
        CHECK(power_iteration_lmax(L) == doctest::Approx(expect).epsilon(1e-6));
    }
}

TEST_CASE("HyperParams derives alpha, beta, gamma and validates inputs") {
    const int T_n = 200;
    HyperParams hp(4, Vector::Ones(50), 3.0, std::exp(0.005 * T_n), 0.0, 1.0, 3.0, T_n);
    CHECK(hp.alpha == doctest::Approx(2.0 / (T_n * std::exp(1.0))));
    CHECK(hp.beta == doctest::Approx(0.01));
    CHECK(hp.gamma == doctest::Approx(0.01));
    CHECK(hp.eta == doctest::Approx(1.5));  // default 0.5 rho

    CHECK_THROWS_AS(HyperParams(4, Vector::Ones(50), 3.0, 0.5, 0.0, 1.0, 3.0, T_n),
                    ValidationError);  // sigma_eps < 1
    CHECK_THROWS_AS(HyperParams(50, Vector::Ones(50), 3.0, 1.5, 0.0, 1.0, 3.0, T_n),
                    ValidationError);  // k out of range
    CHECK_THROWS_AS(HyperParams(4, Vector::Ones(50), 2.0, 1.5, 0.0, 1.0, 3.0, T_n),
                    ValidationError);  // nu <= 2

    const HyperParams ablation = hp.without_temporal_term();
    CHECK(ablation.alpha == 0.0);
    CHECK(ablation.beta == hp.beta);
}

TEST_CASE("FrameObservation zeroes unobserved entries and validates the mask") {
    Matrix Y(2, 2), M(2, 2);
    Y << 1.0, 2.0, 3.0, 4.0;
    M << 1.0, 0.0, 1.0, 1.0;
    FrameObservation obs(Y, M);
    CHECK(obs.Y(0, 1) == 0.0);
    CHECK(obs.Y(1, 1) == 4.0);
    CHECK_FALSE(obs.fully_observed());

    M(0, 1) = 2.0;
    CHECK_THROWS_AS(FrameObservation(Y, M), ValidationError);
}
