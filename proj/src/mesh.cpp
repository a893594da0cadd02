#include "sdlab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace sdlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMinAngle = 20.0 * kPi / 180.0;

std::uint64_t edge_key(int a, int b)
{
    if (a > b)
        std::swap(a, b);
    return (std::uint64_t(std::uint32_t(a)) << 32) | std::uint32_t(b);
}

double incircle(const Point2d& a, const Point2d& b, const Point2d& c, const Point2d& d)
{
    const long double adx = a.x() - d.x(), ady = a.y() - d.y();
    const long double bdx = b.x() - d.x(), bdy = b.y() - d.y();
    const long double cdx = c.x() - d.x(), cdy = c.y() - d.y();
    const long double ad = adx * adx + ady * ady;
    const long double bd = bdx * bdx + bdy * bdy;
    const long double cd = cdx * cdx + cdy * cdy;
    return double(adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx));
}

Point2d circumcenter(const Point2d& a, const Point2d& b, const Point2d& c)
{
    const Point2d ab = b - a, ac = c - a;
    const double d = 2.0 * cross<double>(ab, ac);
    const double ab2 = ab.squaredNorm(), ac2 = ac.squaredNorm();
    return a + Point2d(ac.y() * ab2 - ab.y() * ac2, ab.x() * ac2 - ac.x() * ab2) / d;
}

double triangle_min_angle(const Point2d& a, const Point2d& b, const Point2d& c)
{
    auto ang = [](const Point2d& p, const Point2d& q, const Point2d& r) {
        const Point2d u = q - p, v = r - p;
        return std::atan2(std::abs(cross<double>(u, v)), u.dot(v));
    };
    return std::min({ang(a, b, c), ang(b, c, a), ang(c, a, b)});
}

// Hilbert index of (x, y) on a 2^16 grid.
std::uint64_t hilbert_key(std::uint32_t x, std::uint32_t y)
{
    std::uint64_t d = 0;
    for (std::uint32_t s = 1u << 15; s > 0; s >>= 1) {
        const std::uint32_t rx = (x & s) > 0;
        const std::uint32_t ry = (y & s) > 0;
        d += std::uint64_t(s) * s * ((3 * rx) ^ ry);
        if (ry == 0) {
            if (rx == 1) {
                x = s - 1 - x;
                y = s - 1 - y;
            }
            std::swap(x, y);
        }
    }
    return d;
}

struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> nb; // nb[k] is across the edge opposite v[k]
    bool alive = true;
};

// Incremental Bowyer-Watson triangulation inside a super triangle (vertices 0, 1, 2).
class Delaunay {
public:
    Delaunay(const Point2d& lo, const Point2d& hi)
    {
        const Point2d c = 0.5 * (lo + hi);
        const double r = 50.0 * std::max((hi - lo).norm(), 1e-300);
        for (int k = 0; k < 3; ++k) {
            const double a = kPi / 2.0 + 2.0 * kPi * k / 3.0;
            pts.push_back(c + r * Point2d(std::cos(a), std::sin(a)));
            vert_tri.push_back(0);
        }
        tris.push_back(Tri{{0, 1, 2}, {-1, -1, -1}, true});
    }

    bool is_super(int v) const { return v < 3; }

    // Returns the new vertex index; triangles created are appended to `created`.
    int insert(const Point2d& p, std::vector<int>* created = nullptr)
    {
        const int t0 = locate(p);
        const int pi = int(pts.size());
        pts.push_back(p);
        vert_tri.push_back(-1);

        ++stamp_;
        mark_.resize(tris.size(), 0);
        std::vector<int> cavity{t0};
        mark_[t0] = stamp_;
        for (std::size_t i = 0; i < cavity.size(); ++i) {
            const Tri& t = tris[cavity[i]];
            for (int k = 0; k < 3; ++k) {
                const int n = t.nb[k];
                if (n < 0 || mark_[n] == stamp_)
                    continue;
                const Tri& tn = tris[n];
                if (incircle(pts[tn.v[0]], pts[tn.v[1]], pts[tn.v[2]], p) > 0.0) {
                    mark_[n] = stamp_;
                    cavity.push_back(n);
                }
            }
        }

        struct Border {
            int a, b, outside;
        };
        std::vector<Border> border;
        for (;;) {
            border.clear();
            int bad = -1;
            for (int ct : cavity) {
                if (mark_[ct] != stamp_)
                    continue;
                const Tri& t = tris[ct];
                for (int k = 0; k < 3; ++k) {
                    const int n = t.nb[k];
                    if (n >= 0 && mark_[n] == stamp_)
                        continue;
                    const int a = t.v[(k + 1) % 3], b = t.v[(k + 2) % 3];
                    if (orient<double>(pts[a], pts[b], p) <= 0.0 && ct != t0)
                        bad = ct;
                    border.push_back({a, b, n});
                }
            }
            if (bad < 0)
                break;
            mark_[bad] = 0; // shrink the cavity until it is star-shaped from p
        }

        const int first = int(tris.size());
        for (int ct : cavity)
            if (mark_[ct] == stamp_)
                tris[ct].alive = false;
        for (const Border& e : border) {
            const int id = int(tris.size());
            tris.push_back(Tri{{e.a, e.b, pi}, {-1, -1, e.outside}, true});
            if (e.outside >= 0) {
                Tri& o = tris[e.outside];
                for (int k = 0; k < 3; ++k)
                    if (o.v[(k + 1) % 3] == e.b && o.v[(k + 2) % 3] == e.a)
                        o.nb[k] = id;
            }
            vert_tri[e.a] = vert_tri[e.b] = vert_tri[pi] = id;
            if (created)
                created->push_back(id);
        }
        const int last = int(tris.size());
        for (int i = first; i < last; ++i) {
            Tri& t = tris[i];
            for (int j = first; j < last; ++j) {
                if (j == i)
                    continue;
                if (tris[j].v[0] == t.v[1])
                    t.nb[0] = j; // across (b, p)
                if (tris[j].v[1] == t.v[0])
                    t.nb[1] = j; // across (p, a)
            }
        }
        last_ = last - 1;
        return pi;
    }

    int locate(const Point2d& p)
    {
        int t = last_;
        if (t < 0 || !tris[t].alive)
            t = any_alive();
        const std::size_t limit = 4 * tris.size() + 16;
        for (std::size_t step = 0; step < limit; ++step) {
            const Tri& tri = tris[t];
            int next = -1;
            for (int i = 0; i < 3; ++i) {
                const int k = int((i + step) % 3);
                if (orient<double>(pts[tri.v[(k + 1) % 3]], pts[tri.v[(k + 2) % 3]], p) < 0.0) {
                    next = tri.nb[k];
                    break;
                }
            }
            if (next < 0)
                return t;
            t = next;
        }
        for (int i = 0; i < int(tris.size()); ++i) {
            if (!tris[i].alive)
                continue;
            const Tri& tri = tris[i];
            if (orient<double>(pts[tri.v[0]], pts[tri.v[1]], p) >= 0.0 &&
                orient<double>(pts[tri.v[1]], pts[tri.v[2]], p) >= 0.0 &&
                orient<double>(pts[tri.v[2]], pts[tri.v[0]], p) >= 0.0)
                return i;
        }
        throw MeshError("point location failed");
    }

    // Apex vertices of the triangles having (a, b) as an edge.
    std::vector<int> apexes(int a, int b) const
    {
        std::vector<int> out;
        for (int t : around(a)) {
            const Tri& tri = tris[t];
            for (int k = 0; k < 3; ++k)
                if (tri.v[(k + 1) % 3] == a && tri.v[(k + 2) % 3] == b)
                    out.push_back(tri.v[k]);
                else if (tri.v[(k + 1) % 3] == b && tri.v[(k + 2) % 3] == a)
                    out.push_back(tri.v[k]);
        }
        return out;
    }

    std::vector<int> around(int a) const
    {
        std::vector<int> out;
        const int start = vert_tri[a];
        int t = start;
        do {
            out.push_back(t);
            const Tri& tri = tris[t];
            const int i = local(tri, a);
            t = tri.nb[(i + 2) % 3]; // across (a, v[i+1])
        } while (t >= 0 && t != start && out.size() < 4096);
        if (t < 0) {
            t = start;
            for (;;) {
                const Tri& tri = tris[t];
                const int i = local(tri, a);
                t = tri.nb[(i + 1) % 3];
                if (t < 0 || t == start)
                    break;
                out.push_back(t);
            }
        }
        return out;
    }

    std::vector<Point2d> pts;
    std::vector<Tri> tris;
    std::vector<int> vert_tri;

private:
    static int local(const Tri& t, int a) { return t.v[0] == a ? 0 : (t.v[1] == a ? 1 : 2); }

    int any_alive() const
    {
        for (int i = int(tris.size()) - 1; i >= 0; --i)
            if (tris[i].alive)
                return i;
        return -1;
    }

    int last_ = 0;
    int stamp_ = 0;
    std::vector<int> mark_;
};

struct Segment {
    int a, b;
    int arc; // -1 for straight pieces
    bool alive = true;
};

class Refiner {
public:
    Refiner(const Polygond& p, double h_target) : poly_(p), h_(h_target), dt_(bbox_lo(p), bbox_hi(p))
    {
        max_points_ = std::size_t(50.0 * p.area() / (0.4 * h_target * h_target)) + 20000;
        tol_ = 1e-12 * p.diameter();
    }

    std::vector<ArcCircle> arcs;

    // PSLG: input points and segments (indices into `input`).
    void build(const std::vector<Point2d>& input, const std::vector<char>& corner,
               const std::vector<std::array<int, 3>>& segments)
    {
        std::vector<std::size_t> order(input.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        const Point2d lo = bbox_lo(poly_), hi = bbox_hi(poly_);
        const Point2d span = (hi - lo).cwiseMax(Point2d(1e-300, 1e-300));
        std::vector<std::uint64_t> key(input.size());
        for (std::size_t i = 0; i < input.size(); ++i) {
            const Point2d u = (input[i] - lo).cwiseQuotient(span) * 65535.0;
            key[i] = hilbert_key(std::uint32_t(std::clamp(u.x(), 0.0, 65535.0)),
                                 std::uint32_t(std::clamp(u.y(), 0.0, 65535.0)));
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
        std::vector<int> id(input.size());
        for (std::size_t i : order) {
            id[i] = dt_.insert(input[i]);
            corner_.resize(dt_.pts.size(), 0);
            corner_[id[i]] = corner[i];
        }
        for (const auto& s : segments)
            add_segment(id[s[0]], id[s[1]], s[2]);
    }

    void run()
    {
        split_encroached();
        std::deque<int> queue;
        for (int t = 0; t < int(dt_.tris.size()); ++t)
            if (dt_.tris[t].alive)
                queue.push_back(t);
        while (!queue.empty()) {
            const int t = queue.front();
            queue.pop_front();
            if (!dt_.tris[t].alive || !is_bad(t))
                continue;
            const Tri& tri = dt_.tris[t];
            const Point2d c = circumcenter(dt_.pts[tri.v[0]], dt_.pts[tri.v[1]], dt_.pts[tri.v[2]]);
            std::vector<int> hit;
            for (int s = 0; s < int(segs_.size()); ++s)
                if (segs_[s].alive && in_diametral(s, c))
                    hit.push_back(s);
            if (hit.empty() && !poly_.contains(c, -tol_))
                hit.push_back(nearest_boundary_segment(c));
            if (!hit.empty()) {
                for (int s : hit)
                    if (segs_[s].alive)
                        split(s);
                queue.push_back(t);
            } else {
                insert(c);
            }
            split_encroached();
            for (int n : created_)
                queue.push_back(n);
            created_.clear();
        }
        for (const auto& s : segs_)
            if (s.alive && dt_.apexes(s.a, s.b).empty())
                throw MeshError("constrained edge lost during refinement");
    }

    Mesh extract() const
    {
        Mesh m;
        std::vector<int> remap(dt_.pts.size(), -1);
        for (int v = 3; v < int(dt_.pts.size()); ++v) {
            remap[v] = int(m.nodes.size());
            m.nodes.push_back(dt_.pts[v]);
        }
        for (const Tri& t : dt_.tris) {
            if (!t.alive || dt_.is_super(t.v[0]) || dt_.is_super(t.v[1]) || dt_.is_super(t.v[2]))
                continue;
            m.triangles.push_back({remap[t.v[0]], remap[t.v[1]], remap[t.v[2]]});
        }
        for (const auto& s : segs_)
            if (s.alive && s.arc >= 0)
                m.arc_edges.push_back(ArcEdge{{remap[s.a], remap[s.b]}, s.arc});
        m.arcs = arcs;
        return m;
    }

private:
    static Point2d bbox_lo(const Polygond& p)
    {
        Point2d lo = p.vertex(0);
        for (const auto& v : p.vertices())
            lo = lo.cwiseMin(v);
        return lo;
    }
    static Point2d bbox_hi(const Polygond& p)
    {
        Point2d hi = p.vertex(0);
        for (const auto& v : p.vertices())
            hi = hi.cwiseMax(v);
        return hi;
    }

    void add_segment(int a, int b, int arc)
    {
        segs_.push_back(Segment{a, b, arc, true});
        seg_keys_.insert(edge_key(a, b));
    }

    int insert(const Point2d& p)
    {
        if (dt_.pts.size() > max_points_)
            throw MeshError("mesh refinement exceeded " + std::to_string(max_points_) +
                            " nodes; the region interface passes too close to a polygon vertex for h_target = " +
                            std::to_string(h_) + " (try a smaller h_target)");
        const int v = dt_.insert(p, &created_);
        corner_.resize(dt_.pts.size(), 0);
        return v;
    }

    bool in_diametral(int s, const Point2d& q) const
    {
        const Point2d& a = dt_.pts[segs_[s].a];
        const Point2d& b = dt_.pts[segs_[s].b];
        return (a - q).dot(b - q) < -1e-12 * (b - a).squaredNorm();
    }

    bool encroached(int s) const
    {
        const auto apex = dt_.apexes(segs_[s].a, segs_[s].b);
        if (apex.empty())
            return true;
        for (int q : apex)
            if (!dt_.is_super(q) && in_diametral(s, dt_.pts[q]))
                return true;
        return false;
    }

    void split(int s)
    {
        const Segment seg = segs_[s];
        const Point2d& a = dt_.pts[seg.a];
        const Point2d& b = dt_.pts[seg.b];
        Point2d m = 0.5 * (a + b);
        if (seg.arc >= 0) {
            const ArcCircle& c = arcs[seg.arc];
            m = c.center + c.radius * (m - c.center).normalized();
        } else if (corner_[seg.a] != corner_[seg.b]) {
            // Concentric shells around input corners keep refinement finite near sharp angles.
            const bool from_a = corner_[seg.a];
            const double len = (b - a).norm();
            const double shell = std::exp2(std::round(std::log2(0.5 * len)));
            const double frac = std::clamp(shell / len, 0.25, 0.75);
            m = from_a ? a + frac * (b - a) : b + frac * (a - b);
        }
        segs_[s].alive = false;
        seg_keys_.erase(edge_key(seg.a, seg.b));
        const int v = insert(m);
        add_segment(seg.a, v, seg.arc);
        add_segment(v, seg.b, seg.arc);
    }

    void split_encroached()
    {
        bool changed = true;
        while (changed) {
            changed = false;
            for (int s = 0; s < int(segs_.size()); ++s) {
                if (segs_[s].alive && encroached(s)) {
                    split(s);
                    changed = true;
                }
            }
        }
    }

    int nearest_boundary_segment(const Point2d& c) const
    {
        int best = -1;
        double dist = std::numeric_limits<double>::infinity();
        for (int s = 0; s < int(segs_.size()); ++s) {
            if (!segs_[s].alive || segs_[s].arc >= 0)
                continue;
            const double d = segment_distance<double>(c, dt_.pts[segs_[s].a], dt_.pts[segs_[s].b]);
            if (d < dist) {
                dist = d;
                best = s;
            }
        }
        return best;
    }

    bool is_segment(int a, int b) const { return seg_keys_.count(edge_key(a, b)) > 0; }

    bool is_bad(int t) const
    {
        const Tri& tri = dt_.tris[t];
        for (int v : tri.v)
            if (dt_.is_super(v))
                return false;
        const Point2d& a = dt_.pts[tri.v[0]];
        const Point2d& b = dt_.pts[tri.v[1]];
        const Point2d& c = dt_.pts[tri.v[2]];
        const double longest = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
        if (longest > h_)
            return true;
        if (triangle_min_angle(a, b, c) >= kMinAngle)
            return false;
        // A small angle between two constrained edges cannot be improved.
        for (int k = 0; k < 3; ++k) {
            const int q = tri.v[k], x = tri.v[(k + 1) % 3], y = tri.v[(k + 2) % 3];
            const Point2d u = dt_.pts[x] - dt_.pts[q], w = dt_.pts[y] - dt_.pts[q];
            const double ang = std::atan2(std::abs(cross<double>(u, w)), u.dot(w));
            if (ang < kMinAngle && is_segment(q, x) && is_segment(q, y))
                return false;
        }
        return true;
    }

    const Polygond& poly_;
    double h_;
    double tol_;
    std::size_t max_points_;
    Delaunay dt_;
    std::vector<Segment> segs_;
    std::unordered_set<std::uint64_t> seg_keys_;
    std::vector<char> corner_;
    std::vector<int> created_;
};

// Interface description: points along the curve (endpoints on ∂Ω) and its arc id.
struct Interface {
    std::vector<Point2d> points;
    int arc = -1;
};

Interface interface_of(const Polygond& p, const RegionSpec& spec, double h, std::vector<ArcCircle>& arcs)
{
    Interface out;
    if (std::holds_alternative<VertexSector>(spec.kind) || std::holds_alternative<SameEdgeArc>(spec.kind)) {
        const ArcGeometry g = region_arc(p, spec);
        const int n = std::max(4, int(std::ceil(g.radius * g.sweep / h)));
        for (int k = 0; k <= n; ++k) {
            const double a = g.start_angle + g.sweep * k / n;
            out.points.push_back(g.center + g.radius * Point2d(std::cos(a), std::sin(a)));
        }
        if (const auto* s = std::get_if<VertexSector>(&spec.kind)) {
            // Pin the endpoints exactly onto the two incident edges.
            out.points.front() = g.center + g.radius * p.edge_direction(s->vertex);
            out.points.back() =
                g.center + g.radius * (p.vertex(s->vertex + p.size() - 1) - p.vertex(s->vertex)).normalized();
        } else {
            const Point2d t = p.edge_direction(std::get<SameEdgeArc>(spec.kind).edge);
            out.points.front() = g.center + g.radius * t;
            out.points.back() = g.center - g.radius * t;
        }
        out.arc = int(arcs.size());
        arcs.push_back(ArcCircle{g.center, g.radius});
    } else if (const auto* c = std::get_if<ChordCut>(&spec.kind)) {
        const int n = std::max(1, int(std::ceil((c->to - c->from).norm() / h)));
        for (int k = 0; k <= n; ++k)
            out.points.push_back(c->from + (c->to - c->from) * (double(k) / n));
    } else {
        throw ParameterError("mesh indicator regions are applied with with_indicator()");
    }
    return out;
}

} // namespace

double Mesh::triangle_area(std::size_t t) const
{
    const auto& tri = triangles[t];
    return 0.5 * orient<double>(nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]);
}

double Mesh::in_d_area() const
{
    double a = 0.0;
    for (std::size_t t = 0; t < triangles.size(); ++t)
        if (region[t] == Region::InD)
            a += triangle_area(t);
    return a;
}

double Mesh::min_angle() const
{
    double best = kPi;
    for (const auto& t : triangles)
        best = std::min(best, triangle_min_angle(nodes[t[0]], nodes[t[1]], nodes[t[2]]));
    return best;
}

void rebuild_topology(Mesh& m)
{
    std::unordered_map<std::uint64_t, std::array<int, 2>> owners;
    owners.reserve(3 * m.triangles.size());
    m.h = 0.0;
    for (int t = 0; t < int(m.triangles.size()); ++t) {
        const auto& tri = m.triangles[t];
        for (int k = 0; k < 3; ++k) {
            const int a = tri[k], b = tri[(k + 1) % 3];
            m.h = std::max(m.h, (m.nodes[b] - m.nodes[a]).norm());
            auto [it, fresh] = owners.try_emplace(edge_key(a, b), std::array<int, 2>{t, -1});
            if (!fresh)
                it->second[1] = t;
        }
    }
    m.boundary_edges.clear();
    for (int t = 0; t < int(m.triangles.size()); ++t) {
        const auto& tri = m.triangles[t];
        for (int k = 0; k < 3; ++k) {
            const int a = tri[k], b = tri[(k + 1) % 3];
            const auto& own = owners.at(edge_key(a, b));
            if (own[1] < 0)
                m.boundary_edges.push_back(BoundaryEdge{{a, b}, EdgeTag::Outer});
            else if (own[0] == t && m.region[own[0]] != m.region[own[1]])
                m.boundary_edges.push_back(BoundaryEdge{{a, b}, EdgeTag::Interface});
        }
    }
}

Mesh triangulate(const Polygond& p, const std::optional<RegionSpec>& spec, double h_target)
{
    if (!(h_target > 0.0) || !(h_target < p.diameter()))
        throw ParameterError("h_target must lie in (0, diam(Omega))");

    std::vector<ArcCircle> arcs;
    std::optional<Interface> iface;
    if (spec)
        iface = interface_of(p, *spec, h_target, arcs);

    // Boundary points per edge: polygon vertices plus interface endpoints.
    const double tol = 1e-10 * p.diameter();
    std::vector<Point2d> input;
    std::vector<char> corner;
    std::vector<std::array<int, 3>> segments;
    auto add_point = [&](const Point2d& x, bool is_corner) {
        for (std::size_t i = 0; i < input.size(); ++i)
            if ((input[i] - x).norm() <= tol) {
                corner[i] = corner[i] || is_corner;
                return int(i);
            }
        input.push_back(x);
        corner.push_back(is_corner);
        return int(input.size() - 1);
    };
    auto add_split_segment = [&](int a, int b) {
        const Point2d pa = input[a], pb = input[b];
        const int n = std::max(1, int(std::ceil((pb - pa).norm() / h_target)));
        int prev = a;
        for (int k = 1; k <= n; ++k) {
            const int cur = k == n ? b : add_point(pa + (pb - pa) * (double(k) / n), false);
            segments.push_back({prev, cur, -1});
            prev = cur;
        }
    };

    std::vector<int> vertex_ids;
    for (const auto& v : p.vertices())
        vertex_ids.push_back(add_point(v, true));
    std::vector<std::vector<std::pair<double, int>>> on_edge(p.size());
    std::vector<int> iface_ids;
    if (iface) {
        for (std::size_t k = 0; k < iface->points.size(); ++k) {
            const bool end = k == 0 || k + 1 == iface->points.size();
            iface_ids.push_back(add_point(iface->points[k], end));
        }
        for (int end : {iface_ids.front(), iface_ids.back()}) {
            std::size_t best = 0;
            double dist = std::numeric_limits<double>::infinity();
            for (std::size_t e = 0; e < p.size(); ++e) {
                const double d = segment_distance<double>(input[end], p.edge_start(e), p.edge_end(e));
                if (d < dist) {
                    dist = d;
                    best = e;
                }
            }
            if (dist > 1e-9 * p.diameter())
                throw GeometryError("interface endpoint does not lie on the polygon boundary");
            const double s = (input[end] - p.edge_start(best)).norm();
            if (s > tol && s < p.edge_length(best) - tol)
                on_edge[best].push_back({s, end});
        }
    }
    for (std::size_t e = 0; e < p.size(); ++e) {
        auto stops = on_edge[e];
        std::sort(stops.begin(), stops.end());
        int prev = vertex_ids[e];
        for (const auto& [s, id] : stops) {
            add_split_segment(prev, id);
            prev = id;
        }
        add_split_segment(prev, vertex_ids[(e + 1) % p.size()]);
    }
    if (iface) {
        for (std::size_t k = 0; k + 1 < iface_ids.size(); ++k) {
            if (iface->arc >= 0)
                segments.push_back({iface_ids[k], iface_ids[k + 1], iface->arc});
            else
                add_split_segment(iface_ids[k], iface_ids[k + 1]);
        }
    }

    Refiner refiner(p, h_target);
    refiner.arcs = arcs;
    refiner.build(input, corner, segments);
    refiner.run();
    Mesh m = refiner.extract();
    m.omega_area = p.area();
    m.region.assign(m.triangles.size(), Region::OutD);
    if (spec) {
        for (std::size_t t = 0; t < m.triangles.size(); ++t) {
            const auto& tri = m.triangles[t];
            const Point2d c = (m.nodes[tri[0]] + m.nodes[tri[1]] + m.nodes[tri[2]]) / 3.0;
            m.region[t] = region_contains(p, *spec, c) ? Region::InD : Region::OutD;
        }
    }
    rebuild_topology(m);
    return m;
}

Mesh refine(const Mesh& m)
{
    Mesh out;
    out.nodes = m.nodes;
    out.arcs = m.arcs;
    out.omega_area = m.omega_area;
    std::unordered_map<std::uint64_t, int> mid;
    mid.reserve(3 * m.triangles.size());
    auto midpoint = [&](int a, int b) {
        auto [it, fresh] = mid.try_emplace(edge_key(a, b), int(out.nodes.size()));
        if (fresh)
            out.nodes.push_back(0.5 * (m.nodes[a] + m.nodes[b]));
        return it->second;
    };
    out.triangles.reserve(4 * m.triangles.size());
    out.region.reserve(4 * m.triangles.size());
    for (std::size_t t = 0; t < m.triangles.size(); ++t) {
        const auto [a, b, c] = m.triangles[t];
        const int ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
        for (const auto& child : {std::array<int, 3>{a, ab, ca}, std::array<int, 3>{ab, b, bc},
                                  std::array<int, 3>{ca, bc, c}, std::array<int, 3>{ab, bc, ca}}) {
            out.triangles.push_back(child);
            out.region.push_back(m.region[t]);
        }
    }
    for (const ArcEdge& e : m.arc_edges) {
        const int v = mid.at(edge_key(e.nodes[0], e.nodes[1]));
        const ArcCircle& c = m.arcs[e.arc];
        out.nodes[v] = c.center + c.radius * (out.nodes[v] - c.center).normalized();
        out.arc_edges.push_back(ArcEdge{{e.nodes[0], v}, e.arc});
        out.arc_edges.push_back(ArcEdge{{v, e.nodes[1]}, e.arc});
    }
    rebuild_topology(out);
    return out;
}

Mesh with_indicator(const Mesh& m, const std::vector<Region>& region)
{
    if (region.size() != m.triangles.size())
        throw ParameterError("indicator size does not match the triangle count");
    Mesh out = m;
    out.region = region;
    rebuild_topology(out);
    return out;
}

Mesh with_indicator(const Mesh& m, const MeshIndicator& indicator)
{
    std::vector<Region> region(m.triangles.size(), Region::OutD);
    for (std::size_t t : indicator.elements) {
        if (t >= region.size())
            throw ParameterError("indicator element " + std::to_string(t) + " out of range");
        region[t] = Region::InD;
    }
    return with_indicator(m, region);
}

MeshAudit audit(const Mesh& m)
{
    MeshAudit a;
    std::unordered_map<std::uint64_t, int> directed;
    std::unordered_set<std::uint64_t> undirected;
    directed.reserve(3 * m.triangles.size());
    a.min_area = std::numeric_limits<double>::infinity();
    auto dkey = [](int x, int y) { return (std::uint64_t(std::uint32_t(x)) << 32) | std::uint32_t(y); };
    for (std::size_t t = 0; t < m.triangles.size(); ++t) {
        const double area = m.triangle_area(t);
        a.area_sum += area;
        a.min_area = std::min(a.min_area, area);
        if (!(area > 1e-14 * m.omega_area))
            a.oriented = false;
        const auto& tri = m.triangles[t];
        for (int k = 0; k < 3; ++k) {
            const int x = tri[k], y = tri[(k + 1) % 3];
            if (++directed[dkey(x, y)] > 1)
                a.conforming = false;
            undirected.insert(edge_key(x, y));
        }
    }
    // Untwinned directed edges must form closed boundary loops: in- and out-degree one.
    std::unordered_map<int, std::array<int, 2>> degree;
    for (const auto& [key, count] : directed) {
        const int x = int(key >> 32), y = int(key & 0xffffffffu);
        if (directed.count(dkey(y, x)))
            continue;
        ++degree[x][0];
        ++degree[y][1];
    }
    for (const auto& [v, deg] : degree)
        if (deg[0] != 1 || deg[1] != 1)
            ++a.hanging;
    std::unordered_set<int> used;
    for (const auto& tri : m.triangles)
        used.insert(tri.begin(), tri.end());
    const long euler = long(used.size()) - long(undirected.size()) + long(m.triangles.size());
    if (euler != 1 || a.hanging > 0)
        a.conforming = false;
    a.area_conserved = std::abs(a.area_sum - m.omega_area) <= 1e-9 * m.omega_area;
    return a;
}

void write_mesh(std::ostream& os, const Mesh& m)
{
    char buf[128];
    os << "sdlab-mesh 1\n";
    os << "nodes " << m.nodes.size() << "\n";
    for (const auto& x : m.nodes) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", x.x(), x.y());
        os << buf;
    }
    os << "triangles " << m.triangles.size() << "\n";
    for (std::size_t t = 0; t < m.triangles.size(); ++t)
        os << m.triangles[t][0] << ' ' << m.triangles[t][1] << ' ' << m.triangles[t][2] << ' '
           << int(m.region[t]) << "\n";
    os << "boundary_edges " << m.boundary_edges.size() << "\n";
    for (const auto& e : m.boundary_edges)
        os << e.nodes[0] << ' ' << e.nodes[1] << ' ' << int(e.tag) << "\n";
}

Mesh read_mesh(std::istream& is)
{
    std::string word;
    int version = 0;
    if (!(is >> word >> version) || word != "sdlab-mesh" || version != 1)
        throw ParameterError("not an sdlab mesh file");
    Mesh m;
    std::size_t count = 0;
    if (!(is >> word >> count) || word != "nodes")
        throw ParameterError("mesh file: expected 'nodes'");
    m.nodes.resize(count);
    for (auto& x : m.nodes)
        if (!(is >> x.x() >> x.y()))
            throw ParameterError("mesh file: truncated node list");
    if (!(is >> word >> count) || word != "triangles")
        throw ParameterError("mesh file: expected 'triangles'");
    m.triangles.resize(count);
    m.region.resize(count);
    for (std::size_t t = 0; t < count; ++t) {
        int tag = 0;
        if (!(is >> m.triangles[t][0] >> m.triangles[t][1] >> m.triangles[t][2] >> tag))
            throw ParameterError("mesh file: truncated triangle list");
        for (int v : m.triangles[t])
            if (v < 0 || std::size_t(v) >= m.nodes.size())
                throw ParameterError("mesh file: triangle references a missing node");
        m.region[t] = tag ? Region::InD : Region::OutD;
    }
    for (std::size_t t = 0; t < count; ++t)
        m.omega_area += m.triangle_area(t);
    rebuild_topology(m);
    return m;
}

} // namespace sdlab
