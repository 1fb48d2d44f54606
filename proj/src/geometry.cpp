#include "helmbem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace helmbem {
namespace {

constexpr double kDegToRad = M_PI / 180.0;

std::vector<Vec2> control_points(const CurveGeometry& g) {
    if (const auto* pl = std::get_if<Polyline>(&g)) return pl->points;
    if (const auto* c = std::get_if<Circle>(&g)) {
        return {c->center - Vec2{c->radius, c->radius},
                c->center + Vec2{c->radius, c->radius}};
    }
    const auto& a = std::get<Arc>(g);
    return {a.center - Vec2{a.radius, a.radius},
            a.center + Vec2{a.radius, a.radius}};
}

double point_segment_distance(Vec2 x, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.dot(ab);
    double t = len2 > 0.0 ? (x - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (x - (a + t * ab)).norm();
}

void append_chain(std::vector<BoundaryMesh::Element>& out, int iface_id,
                  const std::vector<Vec2>& vertices) {
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
        BoundaryMesh::Element e;
        e.interface_id = iface_id;
        e.a = vertices[i];
        e.b = vertices[i + 1];
        e.length = (e.b - e.a).norm();
        if (!(e.length > 0.0))
            throw GeometryError("zero-length edge on interface " +
                                std::to_string(iface_id));
        e.midpoint = (e.a + e.b) * 0.5;
        e.normal = ((e.b - e.a) / e.length).rot_minus90();
        out.push_back(e);
    }
}

std::vector<Vec2> polygonalise(const CurveGeometry& g, int count, int iface_id) {
    std::vector<Vec2> verts;
    if (const auto* c = std::get_if<Circle>(&g)) {
        const double sweep = c->ccw ? 2.0 * M_PI : -2.0 * M_PI;
        verts.reserve(count + 1);
        for (int j = 0; j <= count; ++j) {
            const double th = sweep * j / count;
            verts.push_back(c->center +
                            Vec2{c->radius * std::cos(th), c->radius * std::sin(th)});
        }
        verts.back() = verts.front();  // closed exactly
        return verts;
    }
    if (const auto* a = std::get_if<Arc>(&g)) {
        const double from = a->from_deg * kDegToRad;
        const double to = a->to_deg * kDegToRad;
        verts.reserve(count + 1);
        for (int j = 0; j <= count; ++j) {
            const double th = from + (to - from) * j / count;
            verts.push_back(a->center +
                            Vec2{a->radius * std::cos(th), a->radius * std::sin(th)});
        }
        return verts;
    }
    // Polyline: distribute elements over the legs proportionally to length
    // (largest-remainder), then split each leg equally, so every element
    // stays straight and vertices remain element boundaries.
    const auto& pts = std::get<Polyline>(g).points;
    const int legs = static_cast<int>(pts.size()) - 1;
    if (legs < 1)
        throw GeometryError("polyline of interface " + std::to_string(iface_id) +
                            " needs at least two points");
    if (count < legs)
        throw GeometryError("interface " + std::to_string(iface_id) + ": " +
                            std::to_string(count) +
                            " elements cannot cover a polyline with " +
                            std::to_string(legs) + " segments");
    std::vector<double> len(legs);
    double total = 0.0;
    for (int i = 0; i < legs; ++i) {
        len[i] = (pts[i + 1] - pts[i]).norm();
        if (!(len[i] > 0.0))
            throw GeometryError("zero-length edge on interface " +
                                std::to_string(iface_id));
        total += len[i];
    }
    std::vector<int> n(legs, 1);
    std::vector<double> frac(legs);
    int assigned = legs;
    for (int i = 0; i < legs; ++i) {
        const double quota = count * len[i] / total;
        const int base = std::max(1, static_cast<int>(std::floor(quota)));
        n[i] = base;
        frac[i] = quota - base;
        assigned += base - 1;
    }
    std::vector<int> order(legs);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return frac[a] > frac[b]; });
    for (int idx = 0; assigned < count; ++idx) {
        ++n[order[idx % legs]];
        ++assigned;
    }
    while (assigned > count) {  // over-assignment from the >=1 floor
        const int idx = static_cast<int>(std::max_element(n.begin(), n.end()) -
                                         n.begin());
        if (n[idx] <= 1) break;
        --n[idx];
        --assigned;
    }
    for (int i = 0; i < legs; ++i) {
        for (int j = 0; j < n[i]; ++j)
            verts.push_back(pts[i] + (pts[i + 1] - pts[i]) * (double(j) / n[i]));
    }
    verts.push_back(pts.back());
    return verts;
}

}  // namespace

bool Interface::closed() const {
    if (std::holds_alternative<Circle>(geometry)) return true;
    if (std::holds_alternative<Arc>(geometry)) {
        const auto& a = std::get<Arc>(geometry);
        return std::abs(std::abs(a.to_deg - a.from_deg) - 360.0) < 1e-12;
    }
    const auto& pts = std::get<Polyline>(geometry).points;
    return pts.size() > 2 && (pts.front() - pts.back()).norm() == 0.0;
}

Vec2 Interface::start_point() const {
    if (const auto* c = std::get_if<Circle>(&geometry))
        return c->center + Vec2{c->radius, 0.0};
    if (const auto* a = std::get_if<Arc>(&geometry))
        return a->center + Vec2{a->radius * std::cos(a->from_deg * kDegToRad),
                                a->radius * std::sin(a->from_deg * kDegToRad)};
    return std::get<Polyline>(geometry).points.front();
}

Vec2 Interface::end_point() const {
    if (const auto* c = std::get_if<Circle>(&geometry))
        return c->center + Vec2{c->radius, 0.0};
    if (const auto* a = std::get_if<Arc>(&geometry))
        return a->center + Vec2{a->radius * std::cos(a->to_deg * kDegToRad),
                                a->radius * std::sin(a->to_deg * kDegToRad)};
    return std::get<Polyline>(geometry).points.back();
}

Complex PlaneWave::value(Vec2 x, double k) const {
    return amplitude * std::exp(kImag * (k * direction.dot(x)));
}

Complex PlaneWave::normal_derivative(Vec2 x, Vec2 n, double k) const {
    return kImag * k * direction.dot(n) * value(x, k);
}

const Domain& Scene::domain(int id) const {
    for (const auto& d : domains)
        if (d.id == id) return d;
    throw TopologyError("unknown domain id " + std::to_string(id));
}

bool Scene::has_domain(int id) const {
    for (const auto& d : domains)
        if (d.id == id) return true;
    return false;
}

const Interface& Scene::interface_by_id(int id) const {
    for (const auto& f : interfaces)
        if (f.id == id) return f;
    throw TopologyError("unknown interface id " + std::to_string(id));
}

int Scene::orientation_sign(int domain_id, const Interface& iface) const {
    if (iface.left_domain == domain_id) return 1;
    if (iface.right_domain == domain_id) return -1;
    throw TopologyError("interface " + std::to_string(iface.id) +
                        " does not bound domain " + std::to_string(domain_id));
}

std::vector<const Interface*> Scene::boundary_of(int domain_id) const {
    std::vector<const Interface*> out;
    for (const auto& f : interfaces)
        if (f.left_domain == domain_id || f.right_domain == domain_id)
            out.push_back(&f);
    return out;
}

double Scene::diameter() const {
    double lo_x = std::numeric_limits<double>::max(), lo_y = lo_x;
    double hi_x = std::numeric_limits<double>::lowest(), hi_y = hi_x;
    for (const auto& f : interfaces) {
        for (const Vec2 p : control_points(f.geometry)) {
            lo_x = std::min(lo_x, p.x);
            lo_y = std::min(lo_y, p.y);
            hi_x = std::max(hi_x, p.x);
            hi_y = std::max(hi_y, p.y);
        }
    }
    if (interfaces.empty()) return 1.0;
    return Vec2{hi_x - lo_x, hi_y - lo_y}.norm();
}

double signed_area(const Interface& iface) {
    if (!iface.closed())
        throw GeometryError("signed_area requires a closed interface");
    if (const auto* c = std::get_if<Circle>(&iface.geometry))
        return (c->ccw ? 1.0 : -1.0) * M_PI * c->radius * c->radius;
    const auto& pts = std::get<Polyline>(iface.geometry).points;
    double twice = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        twice += pts[i].cross(pts[i + 1]);
    return 0.5 * twice;
}

void validate_scene(const Scene& scene) {
    if (!(scene.omega > 0.0)) throw GeometryError("omega must be positive");
    if (scene.domains.empty() || scene.interfaces.empty())
        throw TopologyError("scene needs at least one domain and one interface");
    for (std::size_t i = 0; i < scene.domains.size(); ++i) {
        const auto& d = scene.domains[i];
        if (d.epsilon == 0.0)
            throw GeometryError("domain " + std::to_string(d.id) +
                                " has zero material constant");
        for (std::size_t j = i + 1; j < scene.domains.size(); ++j)
            if (scene.domains[j].id == d.id)
                throw TopologyError("duplicate domain id " + std::to_string(d.id));
    }
    if (!scene.has_domain(1)) throw TopologyError("scene must contain domain 1");
    if (scene.domain(1).epsilon != 1.0)
        throw GeometryError("domain 1 is the host medium and must have epsilon = 1");

    const double tol = 1e-9 * scene.diameter();
    for (const auto& f : scene.interfaces) {
        if (f.left_domain == f.right_domain)
            throw TopologyError("interface " + std::to_string(f.id) +
                                " has identical left and right domains");
        if (!scene.has_domain(f.left_domain) || !scene.has_domain(f.right_domain))
            throw TopologyError("interface " + std::to_string(f.id) +
                                " references an unknown domain");
        if (f.element_count < 1)
            throw GeometryError("interface " + std::to_string(f.id) +
                                " needs at least one element");
        if (const auto* c = std::get_if<Circle>(&f.geometry)) {
            if (!(c->radius > 0.0))
                throw GeometryError("interface " + std::to_string(f.id) +
                                    ": circle radius must be positive");
        } else if (const auto* a = std::get_if<Arc>(&f.geometry)) {
            if (!(a->radius > 0.0))
                throw GeometryError("interface " + std::to_string(f.id) +
                                    ": arc radius must be positive");
            const double sweep = std::abs(a->to_deg - a->from_deg);
            if (sweep == 0.0 || sweep > 360.0)
                throw GeometryError("interface " + std::to_string(f.id) +
                                    ": arc sweep must lie in (0, 360] degrees");
        } else {
            const auto& pts = std::get<Polyline>(f.geometry).points;
            if (pts.size() < 2)
                throw GeometryError("interface " + std::to_string(f.id) +
                                    " needs at least two points");
            for (std::size_t i = 0; i + 1 < pts.size(); ++i)
                if (!((pts[i + 1] - pts[i]).norm() > 0.0))
                    throw GeometryError("interface " + std::to_string(f.id) +
                                        " has a zero-length edge");
        }
    }

    // Boundary closure of every bounded domain: traverse each bounding
    // interface with the domain on its left; open-chain endpoints must then
    // pair up start-to-end (material junctions).
    for (const auto& d : scene.domains) {
        if (d.id == 1) continue;
        std::vector<Vec2> starts, ends;
        bool any = false;
        for (const Interface* f : scene.boundary_of(d.id)) {
            any = true;
            if (f->closed()) continue;
            const bool left = f->left_domain == d.id;  // forward traversal
            starts.push_back(left ? f->start_point() : f->end_point());
            ends.push_back(left ? f->end_point() : f->start_point());
        }
        if (!any)
            throw TopologyError("bounded domain " + std::to_string(d.id) +
                                " has no bounding interface");
        std::vector<bool> used(ends.size(), false);
        for (const Vec2& s : starts) {
            bool matched = false;
            for (std::size_t j = 0; j < ends.size(); ++j) {
                if (!used[j] && (ends[j] - s).norm() <= tol) {
                    used[j] = true;
                    matched = true;
                    break;
                }
            }
            if (!matched)
                throw TopologyError(
                    "boundary of domain " + std::to_string(d.id) +
                    " is not closed: unmatched junction endpoint at (" +
                    std::to_string(s.x) + ", " + std::to_string(s.y) + ")");
        }
    }
}

const BoundaryMesh::Range& BoundaryMesh::range_of(int interface_id) const {
    for (const auto& r : ranges)
        if (r.interface_id == interface_id) return r;
    throw TopologyError("mesh holds no range for interface " +
                        std::to_string(interface_id));
}

BoundaryMesh build_mesh(const Scene& scene, std::span<const int> counts) {
    validate_scene(scene);
    if (counts.size() != scene.interfaces.size())
        throw GeometryError("element count list does not match interface count");
    BoundaryMesh mesh;
    for (std::size_t i = 0; i < scene.interfaces.size(); ++i) {
        const auto& f = scene.interfaces[i];
        if (counts[i] < 1)
            throw GeometryError("interface " + std::to_string(f.id) +
                                " needs at least one element");
        const std::size_t begin = mesh.elements.size();
        append_chain(mesh.elements, f.id,
                     polygonalise(f.geometry, counts[i], f.id));
        mesh.ranges.push_back({f.id, begin, mesh.elements.size()});
    }
    return mesh;
}

BoundaryMesh build_mesh(const Scene& scene) {
    std::vector<int> counts;
    counts.reserve(scene.interfaces.size());
    for (const auto& f : scene.interfaces) counts.push_back(f.element_count);
    return build_mesh(scene, counts);
}

double boundary_distance(const BoundaryMesh& mesh, Vec2 x) {
    double d = std::numeric_limits<double>::max();
    for (const auto& e : mesh.elements)
        d = std::min(d, point_segment_distance(x, e.a, e.b));
    return d;
}

std::optional<int> locate_point(const Scene& scene, const BoundaryMesh& mesh,
                                Vec2 x) {
    const double tol = 1e-10 * scene.diameter();
    if (boundary_distance(mesh, x) <= tol) return std::nullopt;

    for (const auto& d : scene.domains) {
        if (d.id == 1) continue;
        int winding = 0;
        for (const Interface* f : scene.boundary_of(d.id)) {
            const auto& range = mesh.range_of(f->id);
            const bool forward = f->left_domain == d.id;
            for (std::size_t ei = range.begin; ei < range.end; ++ei) {
                Vec2 p = forward ? mesh.elements[ei].a : mesh.elements[ei].b;
                Vec2 q = forward ? mesh.elements[ei].b : mesh.elements[ei].a;
                if (p.y <= x.y) {
                    if (q.y > x.y && (q - p).cross(x - p) > 0.0) ++winding;
                } else {
                    if (q.y <= x.y && (q - p).cross(x - p) < 0.0) --winding;
                }
            }
        }
        if (winding != 0) return d.id;
    }
    return 1;
}

}  // namespace helmbem
