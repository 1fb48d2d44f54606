#pragma once

#include <vector>

namespace helmbem {

/// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    int size() const { return static_cast<int>(nodes.size()); }

    /// n-point rule, nodes by Newton iteration on P_n, exactly symmetric.
    static QuadratureRule gauss(int n);

    /// The default 10-node rule (cached).
    static const QuadratureRule& gauss10();
};

}  // namespace helmbem
