#include "sdlab/geometry.hpp"

#include <cmath>
#include <numbers>

namespace sdlab {

namespace {

constexpr double kPi = std::numbers::pi;

double boundary_tolerance(const Polygond& p) { return 1e-9 * p.diameter(); }

// Minimum over phi in [0, pi] of a cos(phi) + b sin(phi).
double min_on_upper_half_circle(double a, double b)
{
    double best = std::min(a, -a);
    const double psi = std::atan2(-b, -a); // direction minimizing the form
    if (psi >= 0.0 && psi <= kPi)
        best = std::min(best, -std::hypot(a, b));
    return best;
}

void require_arc_segments(int arc_segments)
{
    if (arc_segments < 8)
        throw ParameterError("arc_segments must be at least 8, got " + std::to_string(arc_segments));
}

RealizedRegion finish(std::vector<Point2d> boundary, std::vector<bool> interface)
{
    RealizedRegion out;
    out.boundary = std::move(boundary);
    out.interface = std::move(interface);
    out.measure = shoelace_area(out.boundary);
    const std::size_t m = out.boundary.size();
    for (std::size_t k = 0; k < m; ++k) {
        const double len = (out.boundary[(k + 1) % m] - out.boundary[k]).norm();
        (out.interface[k] ? out.relative_perimeter : out.neumann_length) += len;
    }
    return out;
}

void require_inside(const Polygond& p, const std::vector<Point2d>& pts, const char* what)
{
    const double tol = boundary_tolerance(p);
    for (const auto& x : pts)
        if (!p.contains(x, tol))
            throw GeometryError(std::string(what) + " escapes the polygon");
}

RealizedRegion realize_sector(const Polygond& p, const VertexSector& s, double target, int n)
{
    if (s.vertex >= p.size())
        throw ParameterError("sector vertex index out of range");
    const double alpha = p.angle(s.vertex);
    const double rho = std::sqrt(2.0 * target / (n * std::sin(alpha / n)));
    if (rho > max_sector_radius(p, s.vertex) * (1.0 + 1e-12))
        throw GeometryError("vertex sector escapes the polygon: radius " + std::to_string(rho) + " exceeds " +
                            std::to_string(max_sector_radius(p, s.vertex)));
    const Point2d v = p.vertex(s.vertex);
    const Point2d u1 = p.edge_direction(s.vertex);
    const Point2d u0 = (p.vertex(s.vertex + p.size() - 1) - v).normalized();
    const double phi = std::atan2(u1.y(), u1.x());

    std::vector<Point2d> boundary{v};
    for (int k = 0; k <= n; ++k) {
        if (k == 0)
            boundary.push_back(v + rho * u1);
        else if (k == n)
            boundary.push_back(v + rho * u0);
        else {
            const double a = phi + alpha * k / n;
            boundary.push_back(v + rho * Point2d(std::cos(a), std::sin(a)));
        }
    }
    std::vector<bool> interface(boundary.size(), true);
    interface.front() = false;
    interface.back() = false;
    return finish(std::move(boundary), std::move(interface));
}

RealizedRegion realize_half_disk(const Polygond& p, const SameEdgeArc& s, double target, int n)
{
    if (s.edge >= p.size())
        throw ParameterError("edge index out of range");
    const double rho = std::sqrt(2.0 * target / (n * std::sin(kPi / n)));
    const Point2d t = p.edge_direction(s.edge);
    const Point2d nrm = p.inward_normal(s.edge);
    const Point2d c = p.edge_start(s.edge) + s.center * t;
    std::vector<Point2d> boundary;
    for (int k = 0; k <= n; ++k) {
        if (k == 0)
            boundary.push_back(c + rho * t);
        else if (k == n)
            boundary.push_back(c - rho * t);
        else {
            const double a = kPi * k / n;
            boundary.push_back(c + rho * (std::cos(a) * t + std::sin(a) * nrm));
        }
    }
    const double tol = boundary_tolerance(p);
    if (s.center - rho < -tol || s.center + rho > p.edge_length(s.edge) + tol)
        throw GeometryError("half-disk base leaves its edge");
    require_inside(p, boundary, "half-disk");
    std::vector<bool> interface(boundary.size(), true);
    interface.back() = false; // c - rho t -> c + rho t runs along the edge
    return finish(std::move(boundary), std::move(interface));
}

RealizedRegion realize_chord(const Polygond& p, const ChordCut& c)
{
    const double tol = boundary_tolerance(p);
    if (p.boundary_distance(c.from) > tol || p.boundary_distance(c.to) > tol)
        throw GeometryError("chord endpoints must lie on the polygon boundary");
    if ((c.to - c.from).norm() <= tol)
        throw GeometryError("chord endpoints coincide");
    auto boundary = clip_left(p.vertices(), c.from, c.to);
    if (boundary.size() < 3)
        throw GeometryError("chord cut leaves an empty region");
    const std::size_t m = boundary.size();
    std::vector<bool> interface(m);
    for (std::size_t k = 0; k < m; ++k) {
        const Point2d mid = 0.5 * (boundary[k] + boundary[(k + 1) % m]);
        interface[k] = p.boundary_distance(mid) > tol;
    }
    return finish(std::move(boundary), std::move(interface));
}

} // namespace

double shoelace_area(const std::vector<Point2d>& poly)
{
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        a += cross<double>(poly[i], poly[(i + 1) % poly.size()]);
    return 0.5 * a;
}

std::vector<Point2d> clip_left(const std::vector<Point2d>& poly, const Point2d& a, const Point2d& b)
{
    std::vector<Point2d> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2d& P = poly[i];
        const Point2d& Q = poly[(i + 1) % n];
        const double sp = orient<double>(a, b, P);
        const double sq = orient<double>(a, b, Q);
        if (sp >= 0.0)
            out.push_back(P);
        if ((sp > 0.0 && sq < 0.0) || (sp < 0.0 && sq > 0.0))
            out.push_back(P + (sp / (sp - sq)) * (Q - P));
    }
    return out;
}

double clipped_area(const Polygond& p, const Point2d& a, const Point2d& b)
{
    const auto piece = clip_left(p.vertices(), a, b);
    return piece.size() < 3 ? 0.0 : shoelace_area(piece);
}

RegionSpec make_vertex_sector(const Polygond& p, std::size_t vertex, double delta)
{
    const double r = sector_radius(p, vertex, delta);
    return RegionSpec{VertexSector{vertex, r}, delta};
}

RegionSpec make_vertex_sector_radius(const Polygond& p, std::size_t vertex, double radius)
{
    if (vertex >= p.size())
        throw ParameterError("vertex index out of range");
    if (!(radius > 0.0))
        throw ParameterError("sector radius must be positive");
    if (radius > max_sector_radius(p, vertex))
        throw RegimeError("sector of radius " + std::to_string(radius) + " meets a non-adjacent edge",
                          max_sector_delta(p, vertex));
    return RegionSpec{VertexSector{vertex, radius}, 0.5 * p.angle(vertex) * radius * radius};
}

bool half_disk_fits(const Polygond& p, std::size_t edge, double center, double radius)
{
    const double tol = boundary_tolerance(p);
    if (center - radius < -tol || center + radius > p.edge_length(edge) + tol)
        return false;
    const Point2d t = p.edge_direction(edge);
    const Point2d nrm = p.inward_normal(edge);
    const Point2d c = p.edge_start(edge) + center * t;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (k == edge)
            continue;
        const Point2d nk = p.inward_normal(k);
        const double lowest = p.line_distance(c, k) + radius * min_on_upper_half_circle(nk.dot(t), nk.dot(nrm));
        if (lowest < -tol)
            return false;
    }
    return true;
}

RegionSpec make_half_disk(const Polygond& p, std::size_t edge, double center, double delta)
{
    if (edge >= p.size())
        throw ParameterError("edge index out of range");
    const double radius = std::sqrt(2.0 * delta / kPi);
    if (!half_disk_fits(p, edge, center, radius))
        throw GeometryError("half-disk of measure " + std::to_string(delta) + " does not fit on edge " +
                            std::to_string(edge));
    return RegionSpec{SameEdgeArc{edge, center, radius}, delta};
}

RegionSpec make_chord_cut(const Polygond& p, const Point2d& from, const Point2d& to)
{
    const double tol = boundary_tolerance(p);
    if (p.boundary_distance(from) > tol || p.boundary_distance(to) > tol)
        throw GeometryError("chord endpoints must lie on the polygon boundary");
    return RegionSpec{ChordCut{from, to}, clipped_area(p, from, to)};
}

RealizedRegion realize_region(const Polygond& p, const RegionSpec& spec, int arc_segments)
{
    return std::visit(
        [&](const auto& kind) -> RealizedRegion {
            using K = std::decay_t<decltype(kind)>;
            if constexpr (std::is_same_v<K, VertexSector>) {
                require_arc_segments(arc_segments);
                return realize_sector(p, kind, spec.target_measure, arc_segments);
            } else if constexpr (std::is_same_v<K, SameEdgeArc>) {
                require_arc_segments(arc_segments);
                return realize_half_disk(p, kind, spec.target_measure, arc_segments);
            } else if constexpr (std::is_same_v<K, ChordCut>) {
                return realize_chord(p, kind);
            } else {
                throw ParameterError("mesh indicator regions are realized on a mesh, not on the polygon");
            }
        },
        spec.kind);
}

ArcGeometry region_arc(const Polygond& p, const RegionSpec& spec)
{
    if (const auto* s = std::get_if<VertexSector>(&spec.kind)) {
        const Point2d u1 = p.edge_direction(s->vertex);
        return ArcGeometry{p.vertex(s->vertex), s->radius, std::atan2(u1.y(), u1.x()), p.angle(s->vertex)};
    }
    if (const auto* s = std::get_if<SameEdgeArc>(&spec.kind)) {
        const Point2d t = p.edge_direction(s->edge);
        return ArcGeometry{p.edge_start(s->edge) + s->center * t, s->radius, std::atan2(t.y(), t.x()), kPi};
    }
    throw ParameterError("region has no circular arc");
}

bool region_contains(const Polygond& p, const RegionSpec& spec, const Point2d& x)
{
    if (!p.contains(x))
        return false;
    return std::visit(
        [&](const auto& kind) -> bool {
            using K = std::decay_t<decltype(kind)>;
            if constexpr (std::is_same_v<K, VertexSector>) {
                return (x - p.vertex(kind.vertex)).norm() < kind.radius;
            } else if constexpr (std::is_same_v<K, SameEdgeArc>) {
                const Point2d c = p.edge_start(kind.edge) + kind.center * p.edge_direction(kind.edge);
                return (x - c).norm() < kind.radius;
            } else if constexpr (std::is_same_v<K, ChordCut>) {
                return orient<double>(kind.from, kind.to, x) > 0.0;
            } else {
                throw ParameterError("mesh indicator regions are realized on a mesh, not on the polygon");
            }
        },
        spec.kind);
}

} // namespace sdlab
