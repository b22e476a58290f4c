#pragma once

#include <cstdint>
#include <vector>

#include "tvgl/types.hpp"

namespace tvgl {

/// Node partition into k clusters; labels take values in [0, k).
struct Partition {
    IntVector labels;
    int k = 0;

    Partition() = default;
    Partition(IntVector labels_, int k_);

    int size() const { return static_cast<int>(labels.size()); }
};

/// Frobenius relative error ||L_true - L_est||_F / ||L_true||_F.
double rel_err(const Matrix& L_true, const Matrix& L_est);

/// Edge-detection F-score 2TP / (2TP + FP + FN) between the supports of two
/// Laplacians; an edge is present when its weight exceeds edge_tol. Both
/// graphs empty counts as a perfect match.
double f_score(const Matrix& L_true, const Matrix& L_est, double edge_tol = 1e-4);

struct KMeansResult {
    IntVector labels;
    Matrix centers;
    double inertia = 0.0;
};

/// Lloyd's k-means with k-means++ seeding; restarts many inits and keeps the
/// lowest inertia. Deterministic per seed.
KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int restarts = 20,
                    int max_iter = 100);

/// Spectral clustering: k-means on the rows of the eigenvector matrix for
/// the k smallest Laplacian eigenvalues, with optional row normalization.
Partition spectral_clustering(const Matrix& L, int k, std::uint64_t seed,
                              bool normalize_rows = true);

/// Best-label-matching accuracy: the maximum matched fraction over all
/// bijections between predicted and true labels (assignment on the confusion
/// matrix, equivalent to the k! search).
double accuracy(const Partition& truth, const Partition& pred);

/// Majority-label fraction.
double purity(const Partition& truth, const Partition& pred);

/// Newman modularity of a partition on a weighted adjacency matrix.
double modularity(const Matrix& W, const Partition& part);

/// Adjusted Rand index from the contingency table.
double adjusted_rand_index(const Partition& truth, const Partition& pred);

}  // namespace tvgl
