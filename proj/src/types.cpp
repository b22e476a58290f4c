#include "tvgl/types.hpp"

#include "tvgl/errors.hpp"

namespace tvgl {

EdgeWeights::EdgeWeights(int p_, Vector values_) : p(p_), values(std::move(values_)) {
    if (p < 1) {
        throw ValidationError("EdgeWeights: node count must be positive");
    }
    if (values.size() != edge_count()) {
        throw ValidationError("EdgeWeights: expected " + std::to_string(edge_count()) +
                              " weights for p=" + std::to_string(p) + ", got " +
                              std::to_string(values.size()));
    }
    if ((values.array() < 0.0).any()) {
        throw ValidationError("EdgeWeights: weights must be nonnegative");
    }
}

EdgeWeights EdgeWeights::zeros(int p) {
    return EdgeWeights(p, Vector::Zero(tvgl::edge_count(p)));
}

EdgeWeights EdgeWeights::constant(int p, double weight) {
    return EdgeWeights(p, Vector::Constant(tvgl::edge_count(p), weight));
}

int EdgeWeights::edge_index(int i, int j) const {
    // Row i of the strictly-upper triangle starts after i*p - i*(i+1)/2 slots.
    return i * p - i * (i + 1) / 2 + (j - i - 1);
}

std::pair<int, int> EdgeWeights::edge_nodes(int e) const {
    int i = 0;
    int row_len = p - 1;
    while (e >= row_len) {
        e -= row_len;
        --row_len;
        ++i;
    }
    return {i, i + 1 + e};
}

}  // namespace tvgl
