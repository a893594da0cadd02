#include "support.hpp"

#include "sdlab/mesh.hpp"

#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

using namespace sdlab;
using namespace sdlab::test;

namespace {

double longest_edge(const Mesh& m)
{
    double h = 0.0;
    for (const auto& t : m.triangles)
        for (int k = 0; k < 3; ++k)
            h = std::max(h, (m.nodes[t[k]] - m.nodes[t[(k + 1) % 3]]).norm());
    return h;
}

// Interface edges recomputed from scratch: edges whose two triangles carry different tags.
std::size_t count_interface(const Mesh& m)
{
    std::map<std::pair<int, int>, std::vector<Region>> sides;
    for (std::size_t t = 0; t < m.num_triangles(); ++t)
        for (int k = 0; k < 3; ++k) {
            int a = m.triangles[t][k], b = m.triangles[t][(k + 1) % 3];
            sides[{std::min(a, b), std::max(a, b)}].push_back(m.region[t]);
        }
    std::size_t n = 0;
    for (const auto& [e, r] : sides)
        n += r.size() == 2 && r[0] != r[1];
    return n;
}

constexpr double kTwentyDeg = 20.0 * kPi / 180.0;

} // namespace

TEST_CASE("plain triangulations are conforming and quality bounded")
{
    for (const Polygond& p : {unit_square(), rect(2.0, 1.0), equilateral()}) {
        for (double h : {0.3, 0.1, 0.05}) {
            const Mesh m = triangulate(p, std::nullopt, h);
            const MeshAudit a = audit(m);
            CHECK(a.ok());
            CHECK(a.hanging == 0);
            CHECK(a.area_sum == doctest::Approx(p.area()).epsilon(1e-12));
            CHECK(m.min_angle() >= kTwentyDeg - 1e-9);
            CHECK(longest_edge(m) <= h * (1.0 + 1e-9));
            CHECK(m.in_d_area() == 0.0);
        }
    }
}

TEST_CASE("random convex polygons mesh cleanly")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 12; ++trial) {
        const Polygond p = random_convex(rng, 3 + trial % 6);
        const Mesh m = triangulate(p, std::nullopt, 0.15 * std::sqrt(p.area()));
        CHECK(audit(m).ok());
        bool sharp = false;
        for (double a : p.angles())
            sharp = sharp || a < kPi / 3;
        if (!sharp)
            CHECK(m.min_angle() >= kTwentyDeg - 1e-9);
    }
}

TEST_CASE("sector interface: arc nodes on the circle and measure convergence")
{
    const Polygond sq = unit_square();
    const RegionSpec spec = make_vertex_sector_radius(sq, 0, 0.5);
    const double exact = kPi / 4 * 0.25;
    Mesh m = triangulate(sq, spec, 0.1);
    double prev_err = std::abs(m.in_d_area() - exact);
    CHECK(prev_err < 0.01 * exact);
    for (int level = 0; level < 3; ++level) {
        CHECK(audit(m).ok());
        CHECK(m.min_angle() >= kTwentyDeg * 0.5);
        for (const auto& e : m.arc_edges)
            for (int v : e.nodes)
                CHECK((m.nodes[v] - m.arcs[e.arc].center).norm() == doctest::Approx(0.5).epsilon(1e-12));
        std::size_t tagged = 0;
        for (const auto& b : m.boundary_edges)
            tagged += b.tag == EdgeTag::Interface;
        CHECK(tagged == count_interface(m));
        CHECK(tagged == m.arc_edges.size());
        m = refine(m);
        const double err = std::abs(m.in_d_area() - exact);
        CHECK(err < 0.3 * prev_err);
        prev_err = err;
    }
}

TEST_CASE("half disk and chord interfaces")
{
    const Polygond p = rect(2.0, 1.0);
    SUBCASE("half disk")
    {
        const Mesh m = triangulate(p, make_half_disk(p, 0, 1.0, 0.2), 0.08);
        CHECK(audit(m).ok());
        CHECK(m.in_d_area() == doctest::Approx(0.2).epsilon(5e-3));
        CHECK(m.min_angle() >= kTwentyDeg - 1e-9);
    }
    SUBCASE("chord")
    {
        const Mesh m = triangulate(p, make_chord_cut(p, Point2d(0.7, 0.0), Point2d(0.4, 1.0)), 0.1);
        CHECK(audit(m).ok());
        CHECK(m.in_d_area() == doctest::Approx(0.55).epsilon(1e-12));
        CHECK(count_interface(m) > 0);
    }
}

TEST_CASE("red refinement")
{
    const Polygond sq = unit_square();
    const Mesh m = triangulate(sq, make_vertex_sector(sq, 2, 0.1), 0.15);
    const Mesh r = refine(m);
    CHECK(r.num_triangles() == 4 * m.num_triangles());
    CHECK(audit(r).ok());
    CHECK(r.h == doctest::Approx(longest_edge(r)));
    CHECK(r.h <= 0.5 * m.h * (1.0 + 1e-6));
    // children of an OutD triangle away from the arc keep both tag and area
    double out_area = 0.0, out_area_r = 0.0;
    for (std::size_t t = 0; t < m.num_triangles(); ++t)
        if (m.region[t] == Region::OutD)
            out_area += m.triangle_area(t);
    for (std::size_t t = 0; t < r.num_triangles(); ++t)
        if (r.region[t] == Region::OutD)
            out_area_r += r.triangle_area(t);
    CHECK(out_area + m.in_d_area() == doctest::Approx(1.0));
    CHECK(out_area_r + r.in_d_area() == doctest::Approx(1.0));
}

TEST_CASE("indicator replacement rebuilds interface")
{
    const Mesh m = triangulate(unit_square(), std::nullopt, 0.2);
    std::vector<Region> tags(m.num_triangles(), Region::OutD);
    for (std::size_t t = 0; t < tags.size(); t += 3)
        tags[t] = Region::InD;
    const Mesh w = with_indicator(m, tags);
    std::size_t iface = 0;
    for (const auto& b : w.boundary_edges)
        iface += b.tag == EdgeTag::Interface;
    CHECK(iface == count_interface(w));
    MeshIndicator ind;
    for (std::size_t t = 0; t < tags.size(); t += 3)
        ind.elements.push_back(t);
    CHECK(with_indicator(m, ind).region == w.region);
    CHECK_THROWS(with_indicator(m, std::vector<Region>(3, Region::InD)));
}

TEST_CASE("mesh text round trip")
{
    const Polygond sq = unit_square();
    const Mesh m = triangulate(sq, make_vertex_sector(sq, 0, 0.1), 0.2);
    std::stringstream ss;
    write_mesh(ss, m);
    CHECK(ss.str().rfind("sdlab-mesh 1\n", 0) == 0);
    const Mesh r = read_mesh(ss);
    CHECK(r.num_nodes() == m.num_nodes());
    CHECK(r.triangles == m.triangles);
    CHECK(r.region == m.region);
    CHECK(r.boundary_edges.size() == m.boundary_edges.size());
    CHECK(r.in_d_area() == doctest::Approx(m.in_d_area()).epsilon(1e-14));
    std::stringstream bad("not-a-mesh\n");
    CHECK_THROWS(read_mesh(bad));
}

TEST_CASE("mesher parameter checks")
{
    CHECK_THROWS_AS(triangulate(unit_square(), std::nullopt, 0.0), ParameterError);
    CHECK_THROWS_AS(triangulate(unit_square(), std::nullopt, 5.0), ParameterError);
}
