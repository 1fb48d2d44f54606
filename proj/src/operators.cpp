#include "helmbem/operators.hpp"

#include <cmath>
#include <fstream>

#include "helmbem/parallel.hpp"
#include "helmbem/specfun.hpp"

namespace helmbem {
namespace {

constexpr double kInv2Pi = 1.0 / (2.0 * M_PI);

double point_segment_distance(Vec2 x, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.dot(ab);
    double t = len2 > 0.0 ? (x - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (x - (a + t * ab)).norm();
}

/// Sub-segments of (a, b) after recursive bisection toward x: a segment is
/// split while the target sits closer than near_ratio times its length.
void subdivide(Vec2 a, Vec2 b, Vec2 x, double near_ratio, int depth,
               std::vector<std::pair<Vec2, Vec2>>& out) {
    const double len = (b - a).norm();
    if (depth <= 0 || point_segment_distance(x, a, b) >= near_ratio * len) {
        out.emplace_back(a, b);
        return;
    }
    const Vec2 mid = (a + b) * 0.5;
    subdivide(a, mid, x, near_ratio, depth - 1, out);
    subdivide(mid, b, x, near_ratio, depth - 1, out);
}

// Smooth remainder of the single-layer kernel after removing the log:
// (i/4) H_0^(1)(k r) + (1/2pi) ln r.
Complex slp_remainder(double r, double k) {
    if (r <= 0.0)  // r -> 0 limit
        return Complex{-kInv2Pi * (std::log(k / 2.0) + specfun::kEulerGamma),
                       0.25};
    return 0.25 * kImag * specfun::hankel1(0, k * r) + kInv2Pi * std::log(r);
}

struct EntryAccumulator {
    bool want_s = false, want_d = false, want_ds = false, want_n = false;
    Complex s{}, d{}, ds{}, n{};
};

void integrate_entry(EntryAccumulator& acc, const BoundaryMesh::Element& elem,
                     Vec2 x, Vec2 nx, double k, const QuadratureRule& rule,
                     const AssemblyOptions& opt) {
    std::vector<std::pair<Vec2, Vec2>> segs;
    subdivide(elem.a, elem.b, x, opt.near_ratio, opt.max_subdivisions, segs);
    const bool want_h1 = acc.want_d || acc.want_ds;
    const bool want_h0 = acc.want_s || acc.want_n;
    const double nn = nx.dot(elem.normal);
    for (const auto& [p, q] : segs) {
        const Vec2 mid = (p + q) * 0.5;
        const Vec2 half = (q - p) * 0.5;
        const double jac = half.norm();
        for (int i = 0; i < rule.size(); ++i) {
            const Vec2 y = mid + half * rule.nodes[i];
            const Vec2 diff = x - y;
            const double r = diff.norm();
            const double w = rule.weights[i] * jac;
            Complex h0, h1;
            if (want_h0 && want_h1)
                specfun::hankel1_01(k * r, h0, h1);
            else if (want_h0)
                h0 = specfun::hankel1(0, k * r);
            else if (want_h1)
                h1 = specfun::hankel1(1, k * r);
            if (acc.want_s) acc.s += w * 0.25 * kImag * h0;
            if (acc.want_d)
                acc.d += w * 0.25 * kImag * k * h1 * (diff.dot(elem.normal) / r);
            if (acc.want_ds)
                acc.ds -= w * 0.25 * kImag * k * h1 * (diff.dot(nx) / r);
            if (acc.want_n) acc.n += w * 0.25 * kImag * k * k * nn * h0;
        }
    }
    if (acc.want_n) {
        // Maue endpoint terms: dG/dt(x) at the two element endpoints.
        const Vec2 tx = nx.rot_plus90();
        const double ra = (x - elem.a).norm();
        const double rb = (x - elem.b).norm();
        acc.n += 0.25 * kImag * k *
                 (specfun::hankel1(1, k * rb) * ((x - elem.b).dot(tx) / rb) -
                  specfun::hankel1(1, k * ra) * ((x - elem.a).dot(tx) / ra));
    }
}

}  // namespace

TargetSet collocation_targets(const BoundaryMesh& mesh,
                              BoundaryMesh::Range range) {
    TargetSet t;
    t.points.reserve(range.size());
    t.normals.reserve(range.size());
    t.element_ids.reserve(range.size());
    for (std::size_t i = range.begin; i < range.end; ++i) {
        t.points.push_back(mesh.elements[i].midpoint);
        t.normals.push_back(mesh.elements[i].normal);
        t.element_ids.push_back(static_cast<std::ptrdiff_t>(i));
    }
    return t;
}

Complex single_layer_self(double element_length, double k) {
    if (!(element_length > 0.0))
        throw GeometryError("single_layer_self requires a positive length");
    const double half = element_length / 2.0;
    // closed form of -(1/2pi) * 2 int_0^{L/2} ln s ds
    const Complex log_part = -2.0 * kInv2Pi * half * (std::log(half) - 1.0);
    const QuadratureRule& rule = QuadratureRule::gauss10();
    Complex remainder{};
    for (int i = 0; i < rule.size(); ++i) {
        const double s = half * 0.5 * (rule.nodes[i] + 1.0);
        remainder += rule.weights[i] * slp_remainder(s, k);
    }
    remainder *= 2.0 * (half * 0.5);  // fold: integrand even in s
    return log_part + remainder;
}

Complex hypersingular_self(double element_length, double k) {
    const double half = element_length / 2.0;
    return k * k * single_layer_self(element_length, k) -
           0.5 * kImag * k * specfun::hankel1(1, k * half);
}

OperatorBlockSet assemble_group(unsigned kind_mask, double k,
                                const BoundaryMesh& mesh,
                                BoundaryMesh::Range sources,
                                const TargetSet& targets,
                                const AssemblyOptions& options) {
    if (!(k > 0.0)) throw AssemblyError("wavenumber must be positive");
    const auto rows = static_cast<Eigen::Index>(targets.size());
    const auto cols = static_cast<Eigen::Index>(sources.size());
    const bool ws = has_kind(kind_mask, OperatorKind::SingleLayer);
    const bool wd = has_kind(kind_mask, OperatorKind::DoubleLayer);
    const bool wds = has_kind(kind_mask, OperatorKind::AdjointDoubleLayer);
    const bool wn = has_kind(kind_mask, OperatorKind::Hypersingular);
    if ((wds || wn) && targets.normals.size() != targets.size())
        throw AssemblyError("adjoint double layer / hypersingular assembly "
                            "requires target normals");

    OperatorBlockSet out;
    if (ws) out.S.setZero(rows, cols);
    if (wd) out.D.setZero(rows, cols);
    if (wds) out.Dstar.setZero(rows, cols);
    if (wn) out.N.setZero(rows, cols);

    const QuadratureRule& rule = options.quadrature();
    parallel_for(static_cast<std::size_t>(rows), options.threads, [&](std::size_t j) {
        const Vec2 x = targets.points[j];
        const Vec2 nx = targets.normals.empty() ? Vec2{} : targets.normals[j];
        const std::ptrdiff_t self_id =
            targets.element_ids.empty() ? -1 : targets.element_ids[j];
        for (std::size_t m = sources.begin; m < sources.end; ++m) {
            const auto& elem = mesh.elements[m];
            const auto col = static_cast<Eigen::Index>(m - sources.begin);
            const auto row = static_cast<Eigen::Index>(j);
            if (self_id == static_cast<std::ptrdiff_t>(m)) {
                if (ws) out.S(row, col) = single_layer_self(elem.length, k);
                if (wn) out.N(row, col) = hypersingular_self(elem.length, k);
                // D and D* vanish: (x - y).n = 0 on a straight element
                continue;
            }
            if (point_segment_distance(x, elem.a, elem.b) <= 1e-12 * elem.length)
                throw AssemblyError(
                    "collocation point lies on a source element but is not its "
                    "midpoint; regularised entries assume midpoint collocation");
            EntryAccumulator acc;
            acc.want_s = ws;
            acc.want_d = wd;
            acc.want_ds = wds;
            acc.want_n = wn;
            integrate_entry(acc, elem, x, nx, k, rule, options);
            if (ws) out.S(row, col) = acc.s;
            if (wd) out.D(row, col) = acc.d;
            if (wds) out.Dstar(row, col) = acc.ds;
            if (wn) out.N(row, col) = acc.n;
        }
    });
    return out;
}

DenseComplexMatrix assemble(OperatorKind kind, double k,
                            const BoundaryMesh& mesh,
                            BoundaryMesh::Range sources,
                            const TargetSet& targets,
                            const AssemblyOptions& options) {
    OperatorBlockSet set =
        assemble_group(static_cast<unsigned>(kind), k, mesh, sources, targets,
                       options);
    switch (kind) {
        case OperatorKind::SingleLayer: return std::move(set.S);
        case OperatorKind::DoubleLayer: return std::move(set.D);
        case OperatorKind::AdjointDoubleLayer: return std::move(set.Dstar);
        case OperatorKind::Hypersingular: return std::move(set.N);
    }
    throw AssemblyError("unknown operator kind");
}

void dump_matrix_csv(const DenseComplexMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "row,col,re,im\n";
    char buf[80];
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%lld,%lld,%.17g,%.17g\n",
                          static_cast<long long>(i), static_cast<long long>(j),
                          m(i, j).real(), m(i, j).imag());
            out << buf;
        }
}

}  // namespace helmbem
