#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "helmbem/geometry.hpp"
#include "helmbem/quadrature.hpp"
#include "helmbem/types.hpp"

namespace helmbem {

/// The four boundary integral operators of the Helmholtz transmission
/// problem, discretised by midpoint collocation with constant elements.
enum class OperatorKind : unsigned {
    SingleLayer = 1,         // G(x - y)
    DoubleLayer = 2,         // dG/dn(y)
    AdjointDoubleLayer = 4,  // dG/dn(x)
    Hypersingular = 8,       // p.f. d^2 G / dn(x) dn(y)
};

inline unsigned operator|(OperatorKind a, OperatorKind b) {
    return static_cast<unsigned>(a) | static_cast<unsigned>(b);
}
inline unsigned operator|(unsigned a, OperatorKind b) {
    return a | static_cast<unsigned>(b);
}
inline bool has_kind(unsigned mask, OperatorKind k) {
    return (mask & static_cast<unsigned>(k)) != 0;
}

/// Collocation targets; element_ids flags rows whose point is the midpoint
/// of that global mesh element (self entries take the regularised path).
struct TargetSet {
    std::vector<Vec2> points;
    std::vector<Vec2> normals;
    std::vector<std::ptrdiff_t> element_ids;  // -1 when not a mesh midpoint

    std::size_t size() const { return points.size(); }
};

TargetSet collocation_targets(const BoundaryMesh& mesh,
                              BoundaryMesh::Range range);

struct AssemblyOptions {
    const QuadratureRule* rule = nullptr;  // nullptr -> the 10-node default
    int max_subdivisions = 4;   // recursive source splitting toward near targets
    double near_ratio = 2.0;    // subdivide while dist < near_ratio * seg length
    int threads = 1;

    const QuadratureRule& quadrature() const {
        return rule ? *rule : QuadratureRule::gauss10();
    }
};

struct OperatorBlockSet {
    DenseComplexMatrix S, D, Dstar, N;
};

/// Assembles the requested operators between the source elements and the
/// targets in one sweep (kernel evaluations are shared between kinds).
/// Entry (j, m): integral of the kernel over source element m at target j.
OperatorBlockSet assemble_group(unsigned kind_mask, double k,
                                const BoundaryMesh& mesh,
                                BoundaryMesh::Range sources,
                                const TargetSet& targets,
                                const AssemblyOptions& options = {});

DenseComplexMatrix assemble(OperatorKind kind, double k,
                            const BoundaryMesh& mesh,
                            BoundaryMesh::Range sources,
                            const TargetSet& targets,
                            const AssemblyOptions& options = {});

/// Self entry of the single-layer operator on a straight element of length
/// L with midpoint collocation, via subtraction and addition:
///   (i/4) H_0^(1)(k r) = -(1/2pi) ln r + smooth remainder,
/// the log term integrated in closed form (2 * int_0^{L/2} ln s ds), the
/// remainder by the default rule folded onto [0, L/2]; its r -> 0 limit is
/// i/4 - (1/2pi)(ln(k/2) + gamma).
Complex single_layer_self(double element_length, double k);

/// Finite-part self entry of the hypersingular operator: Maue-type
/// regularisation for a constant density.  For any midpoint-collocated
/// straight element the finite part equals
///   k^2 int_m G(x - y) (n(x).n(y)) ds(y)  +  endpoint terms,
/// where the endpoint terms are the kernel antiderivative
/// dG/dt(x) = -(ik/4) H_1^(1)(kr) (x - y).t(x) / r evaluated at the two
/// element endpoints.  On the self element this reduces to
///   k^2 single_layer_self(L, k) - (ik/2) H_1^(1)(k L / 2).
Complex hypersingular_self(double element_length, double k);

/// Debug dump: one "row,col,re,im" line per entry.
void dump_matrix_csv(const DenseComplexMatrix& m, const std::string& path);

}  // namespace helmbem
