#pragma once

#include "tvgl/types.hpp"

namespace tvgl {

// Linear operators between the edge-weight vector and node space, together
// with their adjoints. All maps are applied matrix-free; the m x m operator
// matrices are never materialized outside of tests.

/// Adjacency matrix W with W(i,j) = w_{ij} off the diagonal, zero diagonal.
Matrix adjacency(const EdgeWeights& w);

/// Graph Laplacian Diag(W 1) - W.
Matrix laplacian(const EdgeWeights& w);

/// Weighted node degrees; equals the diagonal of laplacian(w).
Vector degree(const EdgeWeights& w);

/// Adjoint of the Laplacian operator: (L* Y)_{ij} = Y_ii + Y_jj - Y_ij - Y_ji.
Vector laplacian_adjoint(const Matrix& Y);

/// Adjoint of the degree operator: (d* z)_{ij} = z_i + z_j.
Vector degree_adjoint(const Vector& z);

/// Largest eigenvalue of H = L*L + d*d, which equals 4p - 2.
double operator_norm_bound(int p);

}  // namespace tvgl
