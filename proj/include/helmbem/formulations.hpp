#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "helmbem/geometry.hpp"
#include "helmbem/operators.hpp"
#include "helmbem/types.hpp"

namespace helmbem {

enum class FormulationKind {
    ConventionalBM,          // value/derivative coupling as first written down
    CalderonBMBeta1,         // rows swapped, beta = 1
    CalderonBMMinusAlpha,    // rows swapped and scaled by beta = -alpha
    MultiConventional,       // multi-material rows in natural order
    MultiCalderonOrig,       // standard rows scaled by beta, arranged
    MultiCalderonMod,        // inner positively-oriented domains promoted to
                             // Burton-Miller rows with gamma = alpha/eps
    Recipe,                  // the general arrangement for arbitrary scenes
};

std::string to_string(FormulationKind kind);
FormulationKind formulation_from_string(const std::string& tag);

struct FormulationParams {
    std::optional<Complex> alpha;  // default -i / k_1
    std::optional<Complex> beta;   // default per kind
    std::optional<Complex> gamma;  // default alpha / eps_3 where applicable
};

/// One block row of equations: the boundary trace of domain `domain_id`'s
/// representation collocated on interface `interface_id`.
struct RowBlock {
    int domain_id = 0;
    int interface_id = 0;
    bool burton_miller = false;
    Complex scale{1.0, 0.0};   // multiplies standard rows
    Complex coupling{};        // Burton-Miller coefficient
    Eigen::Index offset = 0;
    Eigen::Index count = 0;
};

struct UnknownRange {
    int interface_id = 0;
    char density = 'u';  // 'u' (trace) or 'w' (scaled flux)
    Eigen::Index offset = 0;
    Eigen::Index count = 0;
};

struct BlockSystem {
    DenseComplexMatrix matrix;
    ComplexVector rhs;
    std::vector<UnknownRange> unknowns;  // all u ranges, then all w ranges
    std::vector<RowBlock> rows;
    FormulationKind kind = FormulationKind::Recipe;
    Complex alpha, beta, gamma;
    double omega = 0.0;

    Eigen::Index dimension() const { return matrix.rows(); }
    const UnknownRange& unknown(int interface_id, char density) const;
};

/// Keyed store of assembled operator blocks: the operators of domain
/// `domain_id`'s wavenumber between `source` elements and `target`
/// collocation points.
class BlockTable {
  public:
    struct Key {
        int domain_id;
        int source_interface;
        int target_interface;
        bool operator<(const Key& o) const {
            return std::tie(domain_id, source_interface, target_interface) <
                   std::tie(o.domain_id, o.source_interface, o.target_interface);
        }
    };

    void put(Key key, double wavenumber, OperatorBlockSet blocks);
    bool contains(Key key) const { return table_.count(key) != 0; }
    /// Throws BuildError when the block is missing or was assembled at a
    /// different wavenumber.
    const OperatorBlockSet& get(Key key, double expected_wavenumber) const;

  private:
    struct Entry {
        double wavenumber;
        OperatorBlockSet blocks;
    };
    std::map<Key, Entry> table_;
};

/// Assembles every operator block the formulation's row plan demands.
BlockTable assemble_blocks(FormulationKind kind, const Scene& scene,
                           const BoundaryMesh& mesh,
                           const AssemblyOptions& options = {},
                           const FormulationParams& params = {});

/// Two-domain, single closed interface systems (2N x 2N).
BlockSystem build_single(FormulationKind kind, const Scene& scene,
                         const BoundaryMesh& mesh, const BlockTable& blocks,
                         const FormulationParams& params = {});

/// Fixed multi-material arrangements; requires every bounded domain's
/// normals to be consistently oriented (all inward or all outward),
/// otherwise directs the caller to the Recipe builder.
BlockSystem build_multi(FormulationKind kind, const Scene& scene,
                        const BoundaryMesh& mesh, const BlockTable& blocks,
                        const FormulationParams& params = {});

/// General arrangement: one trace equation per (domain, interface) pair;
/// standard rows scaled by -alpha in the upper half, Burton-Miller rows
/// (coefficient alpha/eps_i) in the lower half.
BlockSystem build_recipe(const Scene& scene, const BoundaryMesh& mesh,
                         const BlockTable& blocks,
                         const FormulationParams& params = {});

/// Dispatch on kind (single-interface kinds route to build_single, ...).
BlockSystem build_formulation(FormulationKind kind, const Scene& scene,
                              const BoundaryMesh& mesh,
                              const BlockTable& blocks,
                              const FormulationParams& params = {});

struct AccumulationPrediction {
    std::vector<Complex> points;
    std::vector<std::string> notes;
    bool unbounded = false;  // no accumulation prediction (conventional rows)
};

/// Eigenvalue accumulation points of the squared operator.
AccumulationPrediction predict_accumulation(FormulationKind kind,
                                            const Scene& scene,
                                            const FormulationParams& params = {});

/// Writes <prefix>matrix.csv (row,col,re,im) and <prefix>rhs.csv (row,re,im).
void dump_system_csv(const BlockSystem& system, const std::string& prefix);

}  // namespace helmbem
