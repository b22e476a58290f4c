#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace tvgl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using IntVector = Eigen::VectorXi;

/// Undirected weighted graph stored as the vector of all p(p-1)/2 edge
/// weights in lexicographic order (0,1), (0,2), ..., (0,p-1), (1,2), ...
/// All weights are nonnegative; zeros mark absent edges.
struct EdgeWeights {
    int p = 0;
    Vector values;

    EdgeWeights() = default;
    EdgeWeights(int p_, Vector values_);

    /// Zero graph on p nodes.
    static EdgeWeights zeros(int p);
    /// All edges set to the same weight.
    static EdgeWeights constant(int p, double weight);

    int edge_count() const { return p * (p - 1) / 2; }

    /// Flat index of the edge {i, j}, i < j, in lexicographic order.
    int edge_index(int i, int j) const;
    /// Inverse of edge_index.
    std::pair<int, int> edge_nodes(int e) const;

    double& operator()(int i, int j) { return values[edge_index(i, j)]; }
    double operator()(int i, int j) const { return values[edge_index(i, j)]; }
};

/// Number of edge slots for a p-node undirected graph.
inline int edge_count(int p) { return p * (p - 1) / 2; }

}  // namespace tvgl
