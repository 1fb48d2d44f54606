#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "helmbem/types.hpp"

namespace helmbem {

/// Material region.  Domain 1 is the unbounded host and carries epsilon = 1.
struct Domain {
    int id = 0;
    double epsilon = 1.0;

    double wavenumber(double omega) const { return omega * std::sqrt(epsilon); }
};

/// Open or closed chain of straight segments, traversed in point order.
struct Polyline {
    std::vector<Vec2> points;
};

/// Full circle, polygonalised at mesh time into the inscribed N-gon.
/// ccw = true traverses counter-clockwise (normals then point outward).
struct Circle {
    Vec2 center;
    double radius = 0.0;
    bool ccw = false;
};

/// Circular arc from from_deg to to_deg (degrees, traversal direction given
/// by the sign of to_deg - from_deg), polygonalised into inscribed chords.
struct Arc {
    Vec2 center;
    double radius = 0.0;
    double from_deg = 0.0;
    double to_deg = 0.0;
};

using CurveGeometry = std::variant<Polyline, Circle, Arc>;

/// Material interface.  The unit normal of every element points from
/// left_domain into right_domain, i.e. the left domain lies on the left of
/// the traversal direction.
struct Interface {
    int id = 0;
    CurveGeometry geometry;
    int left_domain = 0;
    int right_domain = 0;
    int element_count = 0;

    bool closed() const;
    Vec2 start_point() const;
    Vec2 end_point() const;
};

struct PlaneWave {
    Vec2 direction{1.0, 0.0};  // unit propagation direction
    double amplitude = 1.0;

    Complex value(Vec2 x, double k) const;
    /// Normal trace of the gradient, grad u_in . n (analytic, no differencing).
    Complex normal_derivative(Vec2 x, Vec2 n, double k) const;
};

struct Scene {
    std::vector<Domain> domains;       // ascending id, id 1 present
    std::vector<Interface> interfaces; // order defines unknown/mesh layout
    double omega = 0.0;
    PlaneWave incident;

    const Domain& domain(int id) const;
    const Interface& interface_by_id(int id) const;
    bool has_domain(int id) const;

    /// +1 if the normal of `iface` points out of domain `domain_id`
    /// (domain is the left side), -1 if into it.
    int orientation_sign(int domain_id, const Interface& iface) const;
    std::vector<const Interface*> boundary_of(int domain_id) const;

    /// Bounding-box diagonal over all interface geometry; tolerance scale.
    double diameter() const;
};

/// Structural validation: domain table, interface orientation metadata and
/// the closure of every bounded domain's boundary (junction endpoints must
/// chain up).  Throws GeometryError / TopologyError.
void validate_scene(const Scene& scene);

/// Signed area enclosed by a closed interface (positive for counter-
/// clockwise traversal).  Throws GeometryError for open chains.
double signed_area(const Interface& iface);

struct BoundaryMesh {
    struct Element {
        int interface_id = 0;
        Vec2 a, b;       // endpoints in traversal order
        Vec2 midpoint;   // collocation point
        Vec2 normal;     // unit, = rot_minus90(tangent)
        double length = 0.0;
    };
    struct Range {
        int interface_id = 0;
        std::size_t begin = 0;
        std::size_t end = 0;  // half-open

        std::size_t size() const { return end - begin; }
    };

    std::vector<Element> elements;
    std::vector<Range> ranges;  // one per interface, scene order

    std::size_t size() const { return elements.size(); }
    const Range& range_of(int interface_id) const;
    Range full_range() const { return {0, 0, elements.size()}; }
};

/// Meshes every interface with its configured element count.
BoundaryMesh build_mesh(const Scene& scene);

/// Same, overriding the per-interface element counts (scene order).
BoundaryMesh build_mesh(const Scene& scene, std::span<const int> counts);

/// Domain containing x, by winding number against the oriented polygonal
/// interfaces; std::nullopt when x lies within the on-boundary tolerance
/// band (1e-10 x scene diameter) of some element.
std::optional<int> locate_point(const Scene& scene, const BoundaryMesh& mesh,
                                Vec2 x);

/// Distance from x to the nearest mesh element.
double boundary_distance(const BoundaryMesh& mesh, Vec2 x);

}  // namespace helmbem
