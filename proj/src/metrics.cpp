#include "tvgl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tvgl/errors.hpp"

namespace tvgl {

Partition::Partition(IntVector labels_, int k_) : labels(std::move(labels_)), k(k_) {
    if (k < 1) throw ValidationError("Partition: cluster count must be positive");
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= k) {
            throw ValidationError("Partition: label out of range at node " + std::to_string(i));
        }
    }
}

double rel_err(const Matrix& L_true, const Matrix& L_est) {
    if (L_true.rows() != L_est.rows() || L_true.cols() != L_est.cols()) {
        throw ValidationError("rel_err: dimension mismatch");
    }
    const double denom = L_true.norm();
    if (denom == 0.0) throw ValidationError("rel_err: reference Laplacian is zero");
    return (L_true - L_est).norm() / denom;
}

double f_score(const Matrix& L_true, const Matrix& L_est, double edge_tol) {
    if (L_true.rows() != L_est.rows()) throw ValidationError("f_score: dimension mismatch");
    const int p = static_cast<int>(L_true.rows());
    long tp = 0, fp = 0, fn = 0;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            // Off-diagonal Laplacian entries are negated edge weights.
            const bool in_true = -L_true(i, j) > edge_tol;
            const bool in_est = -L_est(i, j) > edge_tol;
            if (in_true && in_est) ++tp;
            else if (in_est) ++fp;
            else if (in_true) ++fn;
        }
    }
    if (tp + fp + fn == 0) return 1.0;
    return 2.0 * tp / static_cast<double>(2 * tp + fp + fn);
}

KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int restarts,
                    int max_iter) {
    const int n = static_cast<int>(points.rows());
    const int dim = static_cast<int>(points.cols());
    if (k < 1 || k > n) throw ValidationError("kmeans: k must lie in [1, n]");

    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart < restarts; ++restart) {
        std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + restart);
        std::uniform_real_distribution<double> unif(0.0, 1.0);

        // k-means++ seeding.
        Matrix centers(k, dim);
        std::uniform_int_distribution<int> first(0, n - 1);
        centers.row(0) = points.row(first(rng));
        Vector dist2 = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
        for (int c = 1; c < k; ++c) {
            const double total = dist2.sum();
            int pick = 0;
            if (total > 0.0) {
                double target = unif(rng) * total;
                for (; pick < n - 1; ++pick) {
                    target -= dist2[pick];
                    if (target <= 0.0) break;
                }
            } else {
                pick = first(rng);
            }
            centers.row(c) = points.row(pick);
            dist2 = dist2.cwiseMin(
                (points.rowwise() - centers.row(c)).rowwise().squaredNorm());
        }

        IntVector labels = IntVector::Constant(n, -1);
        for (int it = 0; it < max_iter; ++it) {
            bool changed = false;
            for (int i = 0; i < n; ++i) {
                int arg = 0;
                double min_d = (points.row(i) - centers.row(0)).squaredNorm();
                for (int c = 1; c < k; ++c) {
                    const double d = (points.row(i) - centers.row(c)).squaredNorm();
                    if (d < min_d) {
                        min_d = d;
                        arg = c;
                    }
                }
                if (labels[i] != arg) {
                    labels[i] = arg;
                    changed = true;
                }
            }
            if (!changed && it > 0) break;

            Matrix sums = Matrix::Zero(k, dim);
            std::vector<int> counts(k, 0);
            for (int i = 0; i < n; ++i) {
                sums.row(labels[i]) += points.row(i);
                ++counts[labels[i]];
            }
            for (int c = 0; c < k; ++c) {
                if (counts[c] > 0) {
                    centers.row(c) = sums.row(c) / counts[c];
                } else {
                    // Re-seed an empty cluster at the point farthest from its center.
                    int far = 0;
                    double far_d = -1.0;
                    for (int i = 0; i < n; ++i) {
                        const double d = (points.row(i) - centers.row(labels[i])).squaredNorm();
                        if (d > far_d) {
                            far_d = d;
                            far = i;
                        }
                    }
                    centers.row(c) = points.row(far);
                }
            }
        }

        double inertia = 0.0;
        for (int i = 0; i < n; ++i) {
            inertia += (points.row(i) - centers.row(labels[i])).squaredNorm();
        }
        if (inertia < best.inertia) {
            best.inertia = inertia;
            best.labels = labels;
            best.centers = centers;
        }
    }
    return best;
}

Partition spectral_clustering(const Matrix& L, int k, std::uint64_t seed,
                              bool normalize_rows) {
    const int p = static_cast<int>(L.rows());
    if (k < 1 || k > p) throw ValidationError("spectral_clustering: k must lie in [1, p]");
    if (k == 1) return Partition(IntVector::Zero(p), 1);

    Eigen::SelfAdjointEigenSolver<Matrix> eig(L);
    Matrix embed = eig.eigenvectors().leftCols(k);
    if (normalize_rows) {
        for (int i = 0; i < p; ++i) {
            const double norm = embed.row(i).norm();
            if (norm > 0.0) embed.row(i) /= norm;
        }
    }
    KMeansResult km = kmeans(embed, k, seed);
    return Partition(std::move(km.labels), k);
}

namespace {

Matrix confusion(const Partition& truth, const Partition& pred, int K) {
    Matrix C = Matrix::Zero(K, K);
    for (int i = 0; i < truth.size(); ++i) {
        C(truth.labels[i], pred.labels[i]) += 1.0;
    }
    return C;
}

}  // namespace

double accuracy(const Partition& truth, const Partition& pred) {
    if (truth.size() != pred.size()) throw ValidationError("accuracy: size mismatch");
    const int n = truth.size();
    const int K = std::max(truth.k, pred.k);
    if (K > 20) throw ValidationError("accuracy: assignment supports at most 20 clusters");
    const Matrix C = confusion(truth, pred, K);

    // Max-weight bijection by DP over subsets of predicted labels.
    const int full = 1 << K;
    std::vector<double> dp(full, -1.0);
    dp[0] = 0.0;
    for (int mask = 0; mask < full; ++mask) {
        if (dp[mask] < 0.0) continue;
        const int row = __builtin_popcount(static_cast<unsigned>(mask));
        if (row == K) continue;
        for (int col = 0; col < K; ++col) {
            if (mask & (1 << col)) continue;
            const int next = mask | (1 << col);
            dp[next] = std::max(dp[next], dp[mask] + C(row, col));
        }
    }
    return dp[full - 1] / n;
}

double purity(const Partition& truth, const Partition& pred) {
    if (truth.size() != pred.size()) throw ValidationError("purity: size mismatch");
    const int n = truth.size();
    const int K = std::max(truth.k, pred.k);
    const Matrix C = confusion(truth, pred, K);
    double matched = 0.0;
    for (int c = 0; c < pred.k; ++c) {
        matched += C.col(c).maxCoeff();
    }
    return matched / n;
}

double modularity(const Matrix& W, const Partition& part) {
    const int p = static_cast<int>(W.rows());
    if (part.size() != p) throw ValidationError("modularity: size mismatch");
    const Vector deg = W.rowwise().sum();
    const double two_s = deg.sum();
    if (two_s == 0.0) return 0.0;
    double q = 0.0;
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (part.labels[i] != part.labels[j]) continue;
            q += W(i, j) - deg[i] * deg[j] / two_s;
        }
    }
    return q / two_s;
}

double adjusted_rand_index(const Partition& truth, const Partition& pred) {
    if (truth.size() != pred.size()) throw ValidationError("adjusted_rand_index: size mismatch");
    const int n = truth.size();
    const int K = std::max(truth.k, pred.k);
    const Matrix C = confusion(truth, pred, K);

    auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
    double sum_ij = 0.0;
    for (int i = 0; i < K; ++i) {
        for (int j = 0; j < K; ++j) sum_ij += choose2(C(i, j));
    }
    double sum_a = 0.0, sum_b = 0.0;
    for (int i = 0; i < K; ++i) sum_a += choose2(C.row(i).sum());
    for (int j = 0; j < K; ++j) sum_b += choose2(C.col(j).sum());

    const double expected = sum_a * sum_b / choose2(static_cast<double>(n));
    const double max_index = 0.5 * (sum_a + sum_b);
    if (max_index == expected) return 1.0;  // both partitions trivial
    return (sum_ij - expected) / (max_index - expected);
}

}  // namespace tvgl
