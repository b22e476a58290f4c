#include "tvgl/graph_ops.hpp"

namespace tvgl {

Matrix adjacency(const EdgeWeights& w) {
    const int p = w.p;
    Matrix W = Matrix::Zero(p, p);
    int e = 0;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j, ++e) {
            W(i, j) = w.values[e];
            W(j, i) = w.values[e];
        }
    }
    return W;
}

Matrix laplacian(const EdgeWeights& w) {
    const int p = w.p;
    Matrix L = Matrix::Zero(p, p);
    int e = 0;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j, ++e) {
            const double we = w.values[e];
            L(i, j) = -we;
            L(j, i) = -we;
            L(i, i) += we;
            L(j, j) += we;
        }
    }
    return L;
}

Vector degree(const EdgeWeights& w) {
    const int p = w.p;
    Vector d = Vector::Zero(p);
    int e = 0;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j, ++e) {
            d[i] += w.values[e];
            d[j] += w.values[e];
        }
    }
    return d;
}

Vector laplacian_adjoint(const Matrix& Y) {
    const int p = static_cast<int>(Y.rows());
    Vector out(edge_count(p));
    int e = 0;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j, ++e) {
            out[e] = Y(i, i) + Y(j, j) - Y(i, j) - Y(j, i);
        }
    }
    return out;
}

Vector degree_adjoint(const Vector& z) {
    const int p = static_cast<int>(z.size());
    Vector out(edge_count(p));
    int e = 0;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j, ++e) {
            out[e] = z[i] + z[j];
        }
    }
    return out;
}

double operator_norm_bound(int p) {
    return 4.0 * p - 2.0;
}

}  // namespace tvgl
