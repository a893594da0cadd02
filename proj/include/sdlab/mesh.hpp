#pragma once

#include "sdlab/geometry.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace sdlab {

enum class Region : std::uint8_t { OutD = 0, InD = 1 };
enum class EdgeTag : std::uint8_t { Outer = 0, Interface = 1 };

struct BoundaryEdge {
    std::array<int, 2> nodes;
    EdgeTag tag;
};

// A piece of the polygonized circular interface; refinement snaps its midpoint to the circle.
struct ArcEdge {
    std::array<int, 2> nodes;
    int arc;
};

struct ArcCircle {
    Point2d center;
    double radius;
};

/// Conforming triangulation of Ω with per-triangle region tags.
///
/// boundary_edges lists ∂Ω edges (Outer) and edges separating an InD from an
/// OutD triangle (Interface). Triangles are counterclockwise.
struct Mesh {
    std::vector<Point2d> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<Region> region;
    std::vector<BoundaryEdge> boundary_edges;
    std::vector<ArcEdge> arc_edges;
    std::vector<ArcCircle> arcs;
    double omega_area = 0.0;
    double h = 0.0; // longest triangle edge

    std::size_t num_nodes() const { return nodes.size(); }
    std::size_t num_triangles() const { return triangles.size(); }
    double triangle_area(std::size_t t) const;
    double in_d_area() const;
    double min_angle() const; // radians
};

/// Conforming Delaunay refinement of Ω with the interface of spec as constrained
/// edges. Every edge has length <= h_target and every angle is >= 20 degrees
/// (except at input corners sharper than 60 degrees). Without a spec, all
/// triangles are OutD. Arc nodes lie on the true circle.
Mesh triangulate(const Polygond& p, const std::optional<RegionSpec>& spec, double h_target);

/// Red refinement: each triangle splits into four, tags are inherited and
/// midpoints of arc edges are projected onto their circle.
Mesh refine(const Mesh& m);

/// Same mesh with InD exactly on the listed triangles; interface edges rebuilt.
Mesh with_indicator(const Mesh& m, const std::vector<Region>& region);
Mesh with_indicator(const Mesh& m, const MeshIndicator& indicator);

// Recomputes h and boundary_edges from triangles and tags.
void rebuild_topology(Mesh& m);

struct MeshAudit {
    bool conforming = true;     // every interior edge shared by two oppositely oriented triangles
    bool oriented = true;       // positive areas above 1e-14 |Ω|
    bool area_conserved = true; // triangle areas sum to |Ω| within 1e-9 relative
    double area_sum = 0.0;
    double min_area = 0.0;
    std::size_t hanging = 0;
    bool ok() const { return conforming && oriented && area_conserved; }
};

MeshAudit audit(const Mesh& m);

// Text format: a header line "sdlab-mesh 1", then "nodes N" followed by N lines
// "x y", "triangles T" followed by T lines "a b c tag" (tag 1 = InD), and
// "boundary_edges E" followed by E lines "a b tag" (tag 0 = outer, 1 = interface).
void write_mesh(std::ostream& os, const Mesh& m);
Mesh read_mesh(std::istream& is);

} // namespace sdlab
