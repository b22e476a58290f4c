#include "tvgl/heavy_tail.hpp"

#include <cmath>
#include <numeric>

#include "tvgl/errors.hpp"
#include "tvgl/graph_ops.hpp"

namespace tvgl {

namespace {

// Union-find over nodes, merged along positive-weight edges.
struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void merge(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

int connected_components(const EdgeWeights& w) {
    UnionFind uf(w.p);
    int e = 0;
    for (int i = 0; i < w.p; ++i) {
        for (int j = i + 1; j < w.p; ++j, ++e) {
            if (w.values[e] > 0.0) uf.merge(i, j);
        }
    }
    int count = 0;
    for (int i = 0; i < w.p; ++i) {
        if (uf.find(i) == i) ++count;
    }
    return count;
}

double graph_t_logdensity(const Vector& x, const EdgeWeights& w, double nu) {
    if (nu <= 2.0) throw ValidationError("graph_t_logdensity: nu must exceed 2");
    const int p = w.p;
    if (x.size() != p) throw ValidationError("graph_t_logdensity: x has wrong length");

    const Matrix L = laplacian(w);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(L);
    const Vector& lam = eig.eigenvalues();  // ascending
    const double lam_max = lam[p - 1];

    const int expected_rank = p - connected_components(w);
    double logdet = 0.0;
    if (expected_rank > 0) {
        const double cutoff = 1e-8 * lam_max;
        int positive = 0;
        for (int i = 0; i < p; ++i) {
            if (lam[i] > cutoff) ++positive;
        }
        if (positive < expected_rank) {
            throw NumericalError("graph_t_logdensity: Laplacian rank " +
                                 std::to_string(positive) + " below expected " +
                                 std::to_string(expected_rank));
        }
        // Sum over the expected_rank largest eigenvalues.
        for (int i = p - expected_rank; i < p; ++i) {
            logdet += std::log(lam[i]);
        }
    }

    const double quad = x.dot(L * x);
    return 0.5 * logdet - 0.5 * (nu + p) * std::log1p(quad / nu);
}

Matrix sample_student_t(const StudentTParams& params, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return sample_student_t(params, count, rng);
}

Matrix sample_student_t(const StudentTParams& params, int count, std::mt19937_64& rng) {
    const int p = static_cast<int>(params.mu.size());
    if (params.nu <= 2.0) throw ValidationError("sample_student_t: nu must exceed 2");
    if (count < 1) throw ValidationError("sample_student_t: count must be positive");
    if (params.sigma.rows() != p || params.sigma.cols() != p) {
        throw ValidationError("sample_student_t: sigma shape mismatch");
    }

    Eigen::LLT<Matrix> llt(params.sigma);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("sample_student_t: sigma is not positive definite");
    }
    const Matrix chol = llt.matrixL();

    std::normal_distribution<double> normal(0.0, 1.0);
    const double nu = params.nu;
    const bool integer_nu = std::abs(nu - std::round(nu)) < 1e-12;

    // ChiSquare(nu) via sum of squared normals for integer nu; gamma otherwise.
    std::gamma_distribution<double> gamma(nu / 2.0, 2.0);
    auto draw_chisq = [&]() {
        if (integer_nu) {
            const int n = static_cast<int>(std::round(nu));
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                const double z = normal(rng);
                s += z * z;
            }
            return s;
        }
        return gamma(rng);
    };

    Matrix out(p, count);
    Vector z(p);
    for (int t = 0; t < count; ++t) {
        for (int i = 0; i < p; ++i) z[i] = normal(rng);
        const double g = draw_chisq();
        out.col(t) = params.mu + (chol * z) * std::sqrt(nu / g);
    }
    return out;
}

namespace {

double t_log_likelihood(const Matrix& X, const Vector& mu, const Matrix& sigma, double nu) {
    const int p = static_cast<int>(X.rows());
    const int T = static_cast<int>(X.cols());
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("fit_student_t: scatter lost positive definiteness");
    }
    double logdet = 0.0;
    for (int i = 0; i < p; ++i) logdet += std::log(llt.matrixL()(i, i));
    logdet *= 2.0;

    const double cnst = std::lgamma(0.5 * (nu + p)) - std::lgamma(0.5 * nu) -
                        0.5 * p * std::log(nu * M_PI);
    double ll = T * (cnst - 0.5 * logdet);
    for (int t = 0; t < T; ++t) {
        const Vector diff = X.col(t) - mu;
        const double delta = diff.dot(llt.solve(diff));
        ll -= 0.5 * (nu + p) * std::log1p(delta / nu);
    }
    return ll;
}

}  // namespace

StudentTFit fit_student_t_fixed_nu(const Matrix& X, double nu, int max_iter, double tol) {
    const int p = static_cast<int>(X.rows());
    const int T = static_cast<int>(X.cols());
    if (T <= p + 1) throw ValidationError("fit_student_t: need more samples than p + 1");
    if (nu <= 2.0) throw ValidationError("fit_student_t: nu must exceed 2");

    Vector mu = X.rowwise().mean();
    Matrix centered = X.colwise() - mu;
    Matrix sigma = (centered * centered.transpose()) / static_cast<double>(T);
    {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
        const double lam_min = eig.eigenvalues()[0];
        const double lam_max = eig.eigenvalues()[p - 1];
        if (lam_min <= 1e-12 * std::max(lam_max, 1.0)) {
            throw ValidationError("fit_student_t: sample scatter is rank deficient");
        }
    }

    StudentTFit fit;
    double ll = t_log_likelihood(X, mu, sigma, nu);
    fit.trace.push_back(ll);

    Vector weights(T);
    for (int it = 0; it < max_iter; ++it) {
        Eigen::LLT<Matrix> llt(sigma);
        if (llt.info() != Eigen::Success) {
            throw NumericalError("fit_student_t: scatter lost positive definiteness");
        }
        for (int t = 0; t < T; ++t) {
            const Vector diff = X.col(t) - mu;
            const double delta = diff.dot(llt.solve(diff));
            weights[t] = (nu + p) / (nu + delta);
        }

        mu = (X * weights) / weights.sum();
        centered = X.colwise() - mu;
        sigma = (centered * weights.asDiagonal() * centered.transpose()) /
                static_cast<double>(T);

        const double ll_new = t_log_likelihood(X, mu, sigma, nu);
        fit.trace.push_back(ll_new);
        fit.iterations = it + 1;
        if (ll_new - ll < tol) {
            ll = ll_new;
            break;
        }
        ll = ll_new;
    }

    fit.params = StudentTParams{mu, sigma, nu};
    fit.log_likelihood = ll;
    return fit;
}

const std::vector<double>& student_t_nu_grid() {
    static const std::vector<double> grid = {2.5, 3.0, 4.0, 5.0, 7.0, 10.0, 15.0, 20.0, 30.0};
    return grid;
}

StudentTFit fit_student_t(const Matrix& X, int max_iter, double tol) {
    StudentTFit best;
    bool first = true;
    for (double nu : student_t_nu_grid()) {
        StudentTFit fit = fit_student_t_fixed_nu(X, nu, max_iter, tol);
        if (first || fit.log_likelihood > best.log_likelihood) {
            best = std::move(fit);
            first = false;
        }
    }
    return best;
}

}  // namespace tvgl
