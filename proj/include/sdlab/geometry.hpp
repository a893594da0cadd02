#pragma once

#include "sdlab/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

namespace sdlab {

template <typename Scalar>
using Point = Eigen::Matrix<Scalar, 2, 1>;
using Point2d = Point<double>;

template <typename Scalar>
inline Scalar cross(const Point<Scalar>& a, const Point<Scalar>& b)
{
    return a.x() * b.y() - a.y() * b.x();
}

// Positive when c lies to the left of a->b.
template <typename Scalar>
inline Scalar orient(const Point<Scalar>& a, const Point<Scalar>& b, const Point<Scalar>& c)
{
    return cross<Scalar>(b - a, c - a);
}

template <typename Scalar>
Scalar segment_distance(const Point<Scalar>& p, const Point<Scalar>& a, const Point<Scalar>& b)
{
    const Point<Scalar> ab = b - a;
    const Scalar len2 = ab.squaredNorm();
    Scalar s = len2 > Scalar(0) ? (p - a).dot(ab) / len2 : Scalar(0);
    s = std::clamp(s, Scalar(0), Scalar(1));
    return (p - (a + s * ab)).norm();
}

/// Convex polygon with counterclockwise vertices.
///
/// Edge i runs from vertex i to vertex i+1, so vertex i is the intersection of
/// edges i-1 and i. Clockwise input is reversed; anything that is not strictly
/// convex and simple raises ValidationError naming the input vertex.
template <typename Scalar = double>
class Polygon {
public:
    using Real = Scalar;
    using PointType = Point<Scalar>;

    explicit Polygon(std::vector<PointType> vertices);

    std::size_t size() const noexcept { return vertices_.size(); }
    const std::vector<PointType>& vertices() const noexcept { return vertices_; }
    const PointType& vertex(std::size_t i) const { return vertices_[i % size()]; }
    const PointType& edge_start(std::size_t i) const { return vertex(i); }
    const PointType& edge_end(std::size_t i) const { return vertex(i + 1); }
    Scalar edge_length(std::size_t i) const { return (edge_end(i) - edge_start(i)).norm(); }
    PointType edge_direction(std::size_t i) const { return (edge_end(i) - edge_start(i)).normalized(); }
    PointType inward_normal(std::size_t i) const
    {
        const PointType t = edge_direction(i);
        return PointType(-t.y(), t.x());
    }
    Scalar angle(std::size_t i) const { return angles_[i % size()]; }
    const std::vector<Scalar>& angles() const noexcept { return angles_; }
    Scalar area() const noexcept { return area_; }
    Scalar diameter() const;

    // Signed distance from p to the supporting line of edge i, positive inside.
    Scalar line_distance(const PointType& p, std::size_t i) const { return inward_normal(i).dot(p - edge_start(i)); }
    Scalar boundary_distance(const PointType& p) const;
    bool contains(const PointType& p, Scalar tol = Scalar(0)) const;

    // Edges i-1 and i meet at vertex i.
    bool incident(std::size_t vertex, std::size_t edge) const
    {
        const std::size_t n = size();
        return edge % n == vertex % n || (edge + 1) % n == vertex % n;
    }

private:
    std::vector<PointType> vertices_;
    std::vector<Scalar> angles_;
    Scalar area_ = Scalar(0);
};

using Polygond = Polygon<double>;

template <typename Scalar>
Polygon<Scalar>::Polygon(std::vector<PointType> vertices) : vertices_(std::move(vertices))
{
    const std::size_t n = vertices_.size();
    if (n < 3)
        throw ValidationError("polygon needs at least 3 vertices, got " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i)
        if (!vertices_[i].allFinite())
            throw ValidationError("vertex " + std::to_string(i) + " is not finite", long(i));

    Scalar twice_area(0);
    for (std::size_t i = 0; i < n; ++i)
        twice_area += cross<Scalar>(vertices_[i], vertices_[(i + 1) % n]);
    const bool clockwise = twice_area < Scalar(0);
    auto input_index = [&](std::size_t i) { return clockwise ? long((n - 1 - i) % n) : long(i); };
    if (clockwise)
        std::reverse(vertices_.begin(), vertices_.end());

    angles_.resize(n);
    Scalar angle_sum(0);
    for (std::size_t i = 0; i < n; ++i) {
        const PointType& prev = vertices_[(i + n - 1) % n];
        const PointType& cur = vertices_[i];
        const PointType& next = vertices_[(i + 1) % n];
        const PointType a = cur - prev;
        const PointType b = next - cur;
        const Scalar la = a.norm();
        const Scalar lb = b.norm();
        if (la == Scalar(0) || lb == Scalar(0))
            throw ValidationError("duplicate vertex at index " + std::to_string(input_index(i)), input_index(i));
        const Scalar turn = cross<Scalar>(a, b);
        if (std::abs(turn) <= Scalar(1e-12) * la * lb)
            throw ValidationError("collinear (degenerate) vertex at index " + std::to_string(input_index(i)),
                                  input_index(i));
        if (turn < Scalar(0))
            throw ValidationError("reflex vertex at index " + std::to_string(input_index(i)) + ": polygon is not convex",
                                  input_index(i));
        const PointType u = prev - cur;
        angles_[i] = std::atan2(std::abs(cross<Scalar>(u, b)), u.dot(b));
        angle_sum += angles_[i];
    }
    const Scalar expected = Scalar(n - 2) * std::numbers::pi_v<Scalar>;
    if (std::abs(angle_sum - expected) > Scalar(1e-10))
        throw ValidationError("interior angles sum to " + std::to_string(double(angle_sum)) +
                              ", polygon is self-intersecting");
    area_ = std::abs(twice_area) / Scalar(2);
}

template <typename Scalar>
Scalar Polygon<Scalar>::diameter() const
{
    Scalar best(0);
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j)
            best = std::max(best, (vertices_[i] - vertices_[j]).norm());
    return best;
}

template <typename Scalar>
Scalar Polygon<Scalar>::boundary_distance(const PointType& p) const
{
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (std::size_t i = 0; i < size(); ++i)
        best = std::min(best, segment_distance<Scalar>(p, edge_start(i), edge_end(i)));
    return best;
}

template <typename Scalar>
bool Polygon<Scalar>::contains(const PointType& p, Scalar tol) const
{
    for (std::size_t i = 0; i < size(); ++i)
        if (line_distance(p, i) < -tol)
            return false;
    return true;
}

template <typename Scalar>
struct PolygonInvariants {
    Scalar alpha_min;
    std::vector<std::size_t> v_min;
    Scalar d;
    Scalar delta_bar;
    Scalar omega_area;
};

/// Smallest angle, its vertices (ties within 1e-9 rad), the vertex/edge distance
/// d = min dist(e_i ∩ e_j, e_k) and the threshold delta_bar = d^2 / (2 alpha_min).
template <typename Scalar>
PolygonInvariants<Scalar> polygon_invariants(const Polygon<Scalar>& p)
{
    PolygonInvariants<Scalar> inv;
    inv.alpha_min = *std::min_element(p.angles().begin(), p.angles().end());
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p.angle(i) <= inv.alpha_min + Scalar(1e-9))
            inv.v_min.push_back(i);
    inv.d = std::numeric_limits<Scalar>::infinity();
    for (std::size_t v = 0; v < p.size(); ++v)
        for (std::size_t k = 0; k < p.size(); ++k)
            if (!p.incident(v, k))
                inv.d = std::min(inv.d, segment_distance<Scalar>(p.vertex(v), p.edge_start(k), p.edge_end(k)));
    inv.delta_bar = inv.d * inv.d / (Scalar(2) * inv.alpha_min);
    inv.omega_area = p.area();
    return inv;
}

/// Largest radius for which B_r(vertex) ∩ Ω is exactly a circular sector.
template <typename Scalar>
Scalar max_sector_radius(const Polygon<Scalar>& p, std::size_t vertex)
{
    Scalar r = std::numeric_limits<Scalar>::infinity();
    for (std::size_t k = 0; k < p.size(); ++k)
        if (!p.incident(vertex, k))
            r = std::min(r, segment_distance<Scalar>(p.vertex(vertex), p.edge_start(k), p.edge_end(k)));
    return r;
}

template <typename Scalar>
Scalar max_sector_delta(const Polygon<Scalar>& p, std::size_t vertex)
{
    const Scalar r = max_sector_radius(p, vertex);
    return p.angle(vertex) * r * r / Scalar(2);
}

/// Radius r = sqrt(2 delta / alpha) of the sector of measure delta at a vertex.
/// Throws RegimeError for delta >= delta_bar, or when the ball reaches an edge
/// not incident to the vertex (then max_delta() is the largest sector measure).
template <typename Scalar>
Scalar sector_radius(const Polygon<Scalar>& p, std::size_t vertex, Scalar delta)
{
    if (vertex >= p.size())
        throw ParameterError("vertex index " + std::to_string(vertex) + " out of range");
    const auto inv = polygon_invariants(p);
    if (!(delta > Scalar(0)) || !(delta < inv.delta_bar))
        throw RegimeError("delta must lie in (0, delta_bar = " + std::to_string(double(inv.delta_bar)) + ")",
                          double(inv.delta_bar));
    const Scalar r = std::sqrt(Scalar(2) * delta / p.angle(vertex));
    const Scalar r_max = max_sector_radius(p, vertex);
    if (r > r_max)
        throw RegimeError("ball of radius " + std::to_string(double(r)) + " at vertex " + std::to_string(vertex) +
                              " meets a non-adjacent edge",
                          double(max_sector_delta(p, vertex)));
    return r;
}

// Candidate subdomains D ⊂ Ω.

struct VertexSector {
    std::size_t vertex;
    double radius;
};

// Half-disk resting on an edge; center is the arclength position along the edge.
struct SameEdgeArc {
    std::size_t edge;
    double center;
    double radius;
};

// D is the part of Ω to the left of the directed chord from -> to.
struct ChordCut {
    Point2d from;
    Point2d to;
};

struct MeshIndicator {
    std::vector<std::size_t> elements;
};

struct RegionSpec {
    std::variant<VertexSector, SameEdgeArc, ChordCut, MeshIndicator> kind;
    double target_measure = 0.0;
};

RegionSpec make_vertex_sector(const Polygond& p, std::size_t vertex, double delta);
RegionSpec make_vertex_sector_radius(const Polygond& p, std::size_t vertex, double radius);
RegionSpec make_half_disk(const Polygond& p, std::size_t edge, double center, double delta);
RegionSpec make_chord_cut(const Polygond& p, const Point2d& from, const Point2d& to);

// True when the half-disk of the given radius centered on the edge stays inside Ω.
bool half_disk_fits(const Polygond& p, std::size_t edge, double center, double radius);

// Exact circle carrying the curved part of ∂D, if any.
struct ArcGeometry {
    Point2d center;
    double radius;
    double start_angle; // counterclockwise from start_angle to start_angle + sweep
    double sweep;
};

/// Polygonal approximation of D. Boundary is counterclockwise; interface[k]
/// marks boundary[k] -> boundary[k+1] as lying inside Ω (Dirichlet part).
struct RealizedRegion {
    std::vector<Point2d> boundary;
    std::vector<bool> interface;
    double measure = 0.0;
    double relative_perimeter = 0.0;
    double neumann_length = 0.0;

    double ratio() const { return relative_perimeter / (2.0 * std::sqrt(measure)); }
};

/// Arc-bounded kinds are polygonalized with arc_segments uniform chords, the
/// radius rescaled so that the polygon has exactly the target measure.
RealizedRegion realize_region(const Polygond& p, const RegionSpec& spec, int arc_segments = 64);

// The true arc of an arc-bounded spec (VertexSector, SameEdgeArc).
ArcGeometry region_arc(const Polygond& p, const RegionSpec& spec);

// Exact membership of a point in the (unpolygonized) region.
bool region_contains(const Polygond& p, const RegionSpec& spec, const Point2d& x);

// Area of the part of Ω to the left of the line a -> b.
double clipped_area(const Polygond& p, const Point2d& a, const Point2d& b);

std::vector<Point2d> clip_left(const std::vector<Point2d>& poly, const Point2d& a, const Point2d& b);

double shoelace_area(const std::vector<Point2d>& poly);

} // namespace sdlab
