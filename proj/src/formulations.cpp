#include "helmbem/formulations.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace helmbem {
namespace {

Complex default_alpha(const Scene& scene) {
    return -kImag / scene.omega;  // -i / k_1 with eps_1 = 1
}

void require_positive_materials(const Scene& scene) {
    for (const auto& d : scene.domains) {
        if (d.epsilon <= 0.0)
            throw BuildError(
                "domain " + std::to_string(d.id) + " has material constant " +
                std::to_string(d.epsilon) +
                "; negative-epsilon (metamaterial) media push the eigenvalue "
                "cluster into the origin and are rejected by the builders");
    }
}

enum class Orientation { Inward, Outward, Mixed };

Orientation domain_orientation(const Scene& scene, int domain_id,
                               std::string* offending = nullptr) {
    bool any_in = false, any_out = false;
    for (const Interface* f : scene.boundary_of(domain_id)) {
        if (scene.orientation_sign(domain_id, *f) > 0)
            any_out = true;
        else
            any_in = true;
        if (any_in && any_out && offending)
            *offending += " " + std::to_string(f->id);
    }
    if (any_in && any_out) return Orientation::Mixed;
    return any_out ? Orientation::Outward : Orientation::Inward;
}

int interface_position(const Scene& scene, int interface_id) {
    for (std::size_t i = 0; i < scene.interfaces.size(); ++i)
        if (scene.interfaces[i].id == interface_id) return static_cast<int>(i);
    throw TopologyError("unknown interface id");
}

struct Plan {
    std::vector<RowBlock> rows;  // offsets unset until emit
    Complex alpha, beta, gamma;
};

void sort_rows(const Scene& scene, std::vector<RowBlock>& rows) {
    std::stable_sort(rows.begin(), rows.end(),
                     [&](const RowBlock& a, const RowBlock& b) {
                         if (a.domain_id != b.domain_id)
                             return a.domain_id < b.domain_id;
                         return interface_position(scene, a.interface_id) <
                                interface_position(scene, b.interface_id);
                     });
}

Plan make_plan(FormulationKind kind, const Scene& scene,
               const FormulationParams& params) {
    require_positive_materials(scene);
    Plan plan;
    plan.alpha = params.alpha.value_or(default_alpha(scene));
    const Complex alpha = plan.alpha;

    const bool conventional = kind == FormulationKind::ConventionalBM ||
                              kind == FormulationKind::MultiConventional;
    const bool modified = kind == FormulationKind::MultiCalderonMod ||
                          kind == FormulationKind::Recipe;

    // beta: the scaling of standard rows
    switch (kind) {
        case FormulationKind::ConventionalBM:
        case FormulationKind::MultiConventional:
            plan.beta = 1.0;
            break;
        case FormulationKind::CalderonBMBeta1:
            plan.beta = params.beta.value_or(1.0);
            break;
        case FormulationKind::CalderonBMMinusAlpha:
        case FormulationKind::MultiCalderonMod:
        case FormulationKind::Recipe:
            if (params.beta && std::abs(*params.beta + alpha) > 1e-14)
                throw BuildError(to_string(kind) +
                                 " fixes beta = -alpha; use the beta1 or orig "
                                 "variants to experiment with beta");
            plan.beta = -alpha;
            break;
        case FormulationKind::MultiCalderonOrig:
            plan.beta = params.beta.value_or(-alpha);
            break;
    }
    plan.gamma = 0.0;

    // Classify bounded domains by the orientation of their boundary normals.
    std::set<int> standard_domains, promoted_domains;
    for (const auto& d : scene.domains) {
        if (d.id == 1) continue;
        std::string offending;
        switch (domain_orientation(scene, d.id, &offending)) {
            case Orientation::Inward:
                standard_domains.insert(d.id);
                break;
            case Orientation::Outward:
                promoted_domains.insert(d.id);
                break;
            case Orientation::Mixed:
                if (conventional) {
                    standard_domains.insert(d.id);  // order-only arrangement
                } else {
                    throw TopologyError(
                        "domain " + std::to_string(d.id) +
                        " has mixed normal orientation (interfaces" + offending +
                        "); the arrangement rule needs normals consistently "
                        "inward or outward");
                }
        }
    }

    std::vector<RowBlock> upper, lower;
    for (const auto& d : scene.domains) {
        for (const Interface* f : scene.boundary_of(d.id)) {
            RowBlock row;
            row.domain_id = d.id;
            row.interface_id = f->id;
            if (d.id == 1) {
                row.burton_miller = true;
                row.coupling = alpha;
                lower.push_back(row);
            } else if (conventional) {
                row.burton_miller = false;
                row.scale = 1.0;
                upper.push_back(row);  // merged and sorted below
            } else if (promoted_domains.count(d.id) && modified) {
                row.burton_miller = true;
                row.coupling = params.gamma.value_or(alpha / d.epsilon);
                plan.gamma = row.coupling;
                lower.push_back(row);
            } else if (promoted_domains.count(d.id)) {
                // orig: kept in the Burton-Miller slot but as a scaled
                // standard equation
                row.burton_miller = false;
                row.scale = plan.beta;
                lower.push_back(row);
            } else {
                row.burton_miller = false;
                row.scale = plan.beta;
                upper.push_back(row);
            }
        }
    }
    sort_rows(scene, upper);
    sort_rows(scene, lower);
    if (conventional) {
        // natural order: every row sorted by (domain, interface)
        std::vector<RowBlock> all;
        all.insert(all.end(), upper.begin(), upper.end());
        all.insert(all.end(), lower.begin(), lower.end());
        sort_rows(scene, all);
        plan.rows = std::move(all);
    } else {
        plan.rows = std::move(upper);
        plan.rows.insert(plan.rows.end(), lower.begin(), lower.end());
    }
    return plan;
}

BlockSystem emit(FormulationKind kind, Plan plan, const Scene& scene,
                 const BoundaryMesh& mesh, const BlockTable& blocks) {
    BlockSystem sys;
    sys.kind = kind;
    sys.alpha = plan.alpha;
    sys.beta = plan.beta;
    sys.gamma = plan.gamma;
    sys.omega = scene.omega;

    const auto total = static_cast<Eigen::Index>(mesh.size());
    Eigen::Index cursor = 0;
    for (const auto& f : scene.interfaces) {
        const auto n = static_cast<Eigen::Index>(mesh.range_of(f.id).size());
        sys.unknowns.push_back({f.id, 'u', cursor, n});
        cursor += n;
    }
    for (const auto& f : scene.interfaces) {
        const auto n = static_cast<Eigen::Index>(mesh.range_of(f.id).size());
        sys.unknowns.push_back({f.id, 'w', total + (sys.unknown(f.id, 'u').offset),
                                n});
    }
    const Eigen::Index dim = 2 * total;

    Eigen::Index row_cursor = 0;
    for (auto& row : plan.rows) {
        row.offset = row_cursor;
        row.count = static_cast<Eigen::Index>(mesh.range_of(row.interface_id).size());
        row_cursor += row.count;
    }
    if (row_cursor != dim)
        throw BuildError("row plan does not produce a square system (" +
                         std::to_string(row_cursor) + " equations for " +
                         std::to_string(dim) + " unknowns)");
    sys.rows = plan.rows;

    sys.matrix.setZero(dim, dim);
    sys.rhs.setZero(dim);
    const double k1 = scene.omega;

    for (const auto& row : sys.rows) {
        const Domain& dom = scene.domain(row.domain_id);
        const double eps = dom.epsilon;
        const double k = dom.wavenumber(scene.omega);
        for (const Interface* src : scene.boundary_of(row.domain_id)) {
            const double sigma = scene.orientation_sign(row.domain_id, *src);
            const auto& bs =
                blocks.get({row.domain_id, src->id, row.interface_id}, k);
            const auto& cu = sys.unknown(src->id, 'u');
            const auto& cw = sys.unknown(src->id, 'w');
            auto ublock = sys.matrix.block(row.offset, cu.offset, row.count,
                                           cu.count);
            auto wblock = sys.matrix.block(row.offset, cw.offset, row.count,
                                           cw.count);
            if (row.burton_miller) {
                ublock += sigma * (bs.D + row.coupling * bs.N);
                wblock -= (sigma * eps) * (bs.S + row.coupling * bs.Dstar);
            } else {
                ublock += (row.scale * sigma) * bs.D;
                wblock -= (row.scale * sigma * eps) * bs.S;
            }
        }
        // identity terms couple the row's interface to its own unknowns
        const auto& cu = sys.unknown(row.interface_id, 'u');
        const auto& cw = sys.unknown(row.interface_id, 'w');
        const Complex u_diag = row.burton_miller ? Complex{0.5} : 0.5 * row.scale;
        sys.matrix.block(row.offset, cu.offset, row.count, cu.count)
            .diagonal()
            .array() += u_diag;
        if (row.burton_miller)
            sys.matrix.block(row.offset, cw.offset, row.count, cw.count)
                .diagonal()
                .array() += 0.5 * row.coupling * eps;
        // incident excitation enters through the host-domain trace rows
        if (row.domain_id == 1) {
            const auto& range = mesh.range_of(row.interface_id);
            for (Eigen::Index j = 0; j < row.count; ++j) {
                const auto& e = mesh.elements[range.begin + j];
                const Complex uin = scene.incident.value(e.midpoint, k1);
                if (row.burton_miller) {
                    const Complex qin = scene.incident.normal_derivative(
                        e.midpoint, e.normal, k1);
                    sys.rhs[row.offset + j] = uin + row.coupling * qin;
                } else {
                    sys.rhs[row.offset + j] = row.scale * uin;
                }
            }
        }
    }
    return sys;
}

}  // namespace

std::string to_string(FormulationKind kind) {
    switch (kind) {
        case FormulationKind::ConventionalBM: return "conventional-bm";
        case FormulationKind::CalderonBMBeta1: return "calderon-bm-beta1";
        case FormulationKind::CalderonBMMinusAlpha: return "calderon-bm";
        case FormulationKind::MultiConventional: return "multi-conventional";
        case FormulationKind::MultiCalderonOrig: return "multi-calderon-orig";
        case FormulationKind::MultiCalderonMod: return "multi-calderon-mod";
        case FormulationKind::Recipe: return "recipe";
    }
    return "?";
}

FormulationKind formulation_from_string(const std::string& tag) {
    for (FormulationKind k :
         {FormulationKind::ConventionalBM, FormulationKind::CalderonBMBeta1,
          FormulationKind::CalderonBMMinusAlpha,
          FormulationKind::MultiConventional, FormulationKind::MultiCalderonOrig,
          FormulationKind::MultiCalderonMod, FormulationKind::Recipe})
        if (to_string(k) == tag) return k;
    throw ConfigError("unknown formulation tag '" + tag + "'");
}

const UnknownRange& BlockSystem::unknown(int interface_id, char density) const {
    for (const auto& u : unknowns)
        if (u.interface_id == interface_id && u.density == density) return u;
    throw BuildError("system has no unknown range for interface " +
                     std::to_string(interface_id));
}

void BlockTable::put(Key key, double wavenumber, OperatorBlockSet blocks) {
    table_[key] = Entry{wavenumber, std::move(blocks)};
}

const OperatorBlockSet& BlockTable::get(Key key,
                                        double expected_wavenumber) const {
    auto it = table_.find(key);
    if (it == table_.end())
        throw BuildError("missing operator block (domain " +
                         std::to_string(key.domain_id) + ", sources " +
                         std::to_string(key.source_interface) + " -> targets " +
                         std::to_string(key.target_interface) + ")");
    if (std::abs(it->second.wavenumber - expected_wavenumber) >
        1e-12 * std::max(1.0, expected_wavenumber))
        throw BuildError("operator block wavenumber mismatch for domain " +
                         std::to_string(key.domain_id));
    return it->second.blocks;
}

BlockTable assemble_blocks(FormulationKind kind, const Scene& scene,
                           const BoundaryMesh& mesh,
                           const AssemblyOptions& options,
                           const FormulationParams& params) {
    const Plan plan = make_plan(kind, scene, params);
    std::map<BlockTable::Key, unsigned> needed;
    for (const auto& row : plan.rows) {
        const unsigned mask =
            row.burton_miller
                ? (OperatorKind::SingleLayer | OperatorKind::DoubleLayer |
                   OperatorKind::AdjointDoubleLayer | OperatorKind::Hypersingular)
                : (OperatorKind::SingleLayer | OperatorKind::DoubleLayer);
        for (const Interface* src : scene.boundary_of(row.domain_id))
            needed[{row.domain_id, src->id, row.interface_id}] |= mask;
    }
    BlockTable table;
    for (const auto& [key, mask] : needed) {
        const double k = scene.domain(key.domain_id).wavenumber(scene.omega);
        const TargetSet targets =
            collocation_targets(mesh, mesh.range_of(key.target_interface));
        table.put(key, k,
                  assemble_group(mask, k, mesh,
                                 mesh.range_of(key.source_interface), targets,
                                 options));
    }
    return table;
}

BlockSystem build_single(FormulationKind kind, const Scene& scene,
                         const BoundaryMesh& mesh, const BlockTable& blocks,
                         const FormulationParams& params) {
    if (kind != FormulationKind::ConventionalBM &&
        kind != FormulationKind::CalderonBMBeta1 &&
        kind != FormulationKind::CalderonBMMinusAlpha)
        throw BuildError("build_single handles the single-material kinds only");
    if (scene.domains.size() != 2 || scene.interfaces.size() != 1 ||
        !scene.interfaces.front().closed())
        throw BuildError(
            "single-material formulations require two domains separated by one "
            "closed interface");
    return emit(kind, make_plan(kind, scene, params), scene, mesh, blocks);
}

BlockSystem build_multi(FormulationKind kind, const Scene& scene,
                        const BoundaryMesh& mesh, const BlockTable& blocks,
                        const FormulationParams& params) {
    if (kind != FormulationKind::MultiConventional &&
        kind != FormulationKind::MultiCalderonOrig &&
        kind != FormulationKind::MultiCalderonMod)
        throw BuildError("build_multi handles the multi-material kinds only");
    try {
        return emit(kind, make_plan(kind, scene, params), scene, mesh, blocks);
    } catch (const TopologyError& e) {
        throw TopologyError(std::string(e.what()) +
                            "; such scenes need the recipe builder");
    }
}

BlockSystem build_recipe(const Scene& scene, const BoundaryMesh& mesh,
                         const BlockTable& blocks,
                         const FormulationParams& params) {
    return emit(FormulationKind::Recipe,
                make_plan(FormulationKind::Recipe, scene, params), scene, mesh,
                blocks);
}

BlockSystem build_formulation(FormulationKind kind, const Scene& scene,
                              const BoundaryMesh& mesh, const BlockTable& blocks,
                              const FormulationParams& params) {
    switch (kind) {
        case FormulationKind::ConventionalBM:
        case FormulationKind::CalderonBMBeta1:
        case FormulationKind::CalderonBMMinusAlpha:
            return build_single(kind, scene, mesh, blocks, params);
        case FormulationKind::MultiConventional:
        case FormulationKind::MultiCalderonOrig:
        case FormulationKind::MultiCalderonMod:
            return build_multi(kind, scene, mesh, blocks, params);
        case FormulationKind::Recipe:
            return build_recipe(scene, mesh, blocks, params);
    }
    throw BuildError("unknown formulation kind");
}

AccumulationPrediction predict_accumulation(FormulationKind kind,
                                            const Scene& scene,
                                            const FormulationParams& params) {
    AccumulationPrediction pred;
    const Complex alpha = params.alpha.value_or(default_alpha(scene));

    auto push_unique = [&pred](Complex p) {
        for (Complex q : pred.points)
            if (std::abs(q - p) <= 1e-12 * std::max(1.0, std::abs(p))) return;
        pred.points.push_back(p);
    };

    auto bounded_epsilon = [&scene]() {
        for (const auto& d : scene.domains)
            if (d.id != 1) return d.epsilon;
        throw BuildError("scene has no bounded domain");
    };

    switch (kind) {
        case FormulationKind::ConventionalBM:
        case FormulationKind::MultiConventional:
            pred.unbounded = true;
            pred.notes.push_back(
                "hypersingular and weakly singular rows are not paired; the "
                "squared-operator spectrum has no accumulation point");
            return pred;
        case FormulationKind::CalderonBMBeta1:
        case FormulationKind::CalderonBMMinusAlpha: {
            const double eps2 = bounded_epsilon();
            const Complex beta = kind == FormulationKind::CalderonBMBeta1
                                     ? params.beta.value_or(1.0)
                                     : -alpha;
            push_unique(beta * (beta - alpha * eps2) / 4.0);
            push_unique(alpha * (alpha - beta * eps2) / 4.0);
            if (pred.points.size() == 1)
                pred.notes.push_back("both diagonal blocks share one point");
            if (std::abs(pred.points.front()) < 1e-14)
                pred.notes.push_back(
                    "accumulation point at the origin (epsilon = -1 class "
                    "media); expect an ill-conditioned system");
            return pred;
        }
        case FormulationKind::MultiCalderonOrig: {
            const Complex beta = params.beta.value_or(-alpha);
            double eps2 = bounded_epsilon();
            for (const auto& d : scene.domains)
                if (d.id != 1 &&
                    domain_orientation(scene, d.id) == Orientation::Inward)
                    eps2 = d.epsilon;
            push_unique(beta * (beta - alpha * eps2) / 4.0);
            push_unique(beta * beta / 4.0);
            push_unique(alpha * (alpha - beta * eps2) / 4.0);
            push_unique(0.0);
            pred.notes.push_back(
                "the zero point comes from the standard rows kept for the "
                "positively oriented domains");
            return pred;
        }
        case FormulationKind::MultiCalderonMod:
        case FormulationKind::Recipe: {
            for (const auto& f : scene.interfaces) {
                const int l = f.left_domain, r = f.right_domain;
                auto side = [&](int id) {
                    return id == 1 ? Orientation::Outward
                                   : domain_orientation(scene, id);
                };
                int std_dom = 0, bm_dom = 0;
                if (side(l) == Orientation::Inward && l != 1) std_dom = l;
                if (side(r) == Orientation::Inward && r != 1) std_dom = r;
                if (l == 1 || side(l) == Orientation::Outward) bm_dom = l;
                if (r == 1 || side(r) == Orientation::Outward) bm_dom = r;
                if (std_dom != 0 && bm_dom != 0) {
                    const double es = scene.domain(std_dom).epsilon;
                    const double ep = scene.domain(bm_dom).epsilon;
                    push_unique(alpha * alpha * (1.0 + es / ep) / 4.0);
                } else {
                    pred.notes.push_back(
                        "interface " + std::to_string(f.id) +
                        ": both trace rows are Burton-Miller type; no "
                        "closed-form accumulation point");
                }
            }
            return pred;
        }
    }
    throw BuildError("unknown formulation kind");
}

void dump_system_csv(const BlockSystem& system, const std::string& prefix) {
    dump_matrix_csv(system.matrix, prefix + "matrix.csv");
    std::ofstream out(prefix + "rhs.csv");
    if (!out) throw std::runtime_error("cannot open " + prefix + "rhs.csv");
    out << "row,re,im\n";
    char buf[80];
    for (Eigen::Index i = 0; i < system.rhs.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g\n",
                      static_cast<long long>(i), system.rhs[i].real(),
                      system.rhs[i].imag());
        out << buf;
    }
}

}  // namespace helmbem
