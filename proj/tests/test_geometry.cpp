#include "support.hpp"

#include "sdlab/io.hpp"

#include <doctest.h>

using namespace sdlab;
using namespace sdlab::test;

namespace {

// d by dense sampling of every non-incident edge, independent of segment_distance.
double sampled_d(const Polygond& p, int samples)
{
    double best = 1e300;
    for (std::size_t v = 0; v < p.size(); ++v)
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (k == v || (k + 1) % p.size() == v)
                continue;
            for (int s = 0; s <= samples; ++s) {
                const Point2d q = p.edge_start(k) + (double(s) / samples) * (p.edge_end(k) - p.edge_start(k));
                best = std::min(best, (q - p.vertex(v)).norm());
            }
        }
    return best;
}

} // namespace

TEST_CASE("unit square invariants")
{
    const auto inv = polygon_invariants(unit_square());
    CHECK(inv.alpha_min == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(inv.d == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(inv.delta_bar - 1.0 / kPi) < 1e-15);
    CHECK(inv.v_min.size() == 4);
    CHECK(inv.omega_area == doctest::Approx(1.0));
}

TEST_CASE("equilateral triangle invariants")
{
    const auto inv = polygon_invariants(equilateral());
    CHECK(std::abs(inv.alpha_min - kPi / 3) < 1e-14);
    CHECK(std::abs(inv.d - std::sqrt(3.0) / 2) < 1e-14);
    CHECK(std::abs(inv.delta_bar - 9.0 / (8.0 * kPi)) < 1e-14);
    CHECK(inv.delta_bar < inv.omega_area);
}

TEST_CASE("rectangle threshold is the shorter side squared over pi")
{
    for (double L : {0.5, 1.0, 3.0}) {
        const auto inv = polygon_invariants(rect(2.0 * L + 0.7, L));
        CHECK(std::abs(inv.delta_bar - L * L / kPi) < 1e-13);
    }
}

TEST_CASE("d matches brute-force boundary sampling")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const Polygond p = random_convex(rng, 3 + trial % 6);
        const double d = polygon_invariants(p).d;
        const double sampled = sampled_d(p, 20000);
        CHECK(d <= sampled + 1e-12);
        CHECK(sampled - d < 1e-3 * p.diameter());
    }
}

TEST_CASE("invariants under rigid motion and scaling")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const Polygond p = random_convex(rng, 3 + trial % 5);
        const double s = 0.3 + 0.2 * trial;
        const Polygond q = transformed(p, s, 0.37 * trial, Point2d(1.5, -0.25 * trial));
        const auto a = polygon_invariants(p), b = polygon_invariants(q);
        CHECK(b.alpha_min == doctest::Approx(a.alpha_min).epsilon(1e-10));
        CHECK(b.d == doctest::Approx(s * a.d).epsilon(1e-10));
        CHECK(b.delta_bar == doctest::Approx(s * s * a.delta_bar).epsilon(1e-10));
        CHECK(b.omega_area == doctest::Approx(s * s * a.omega_area).epsilon(1e-10));
        CHECK(a.delta_bar < a.omega_area);
    }
}

TEST_CASE("clockwise input is reoriented")
{
    const Polygond p({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
    CHECK(p.area() == doctest::Approx(1.0));
    CHECK(polygon_invariants(p).delta_bar == doctest::Approx(1.0 / kPi));
}

TEST_CASE("validation names the offending vertex")
{
    try {
        Polygond({{0, 0}, {2, 0}, {2, 2}, {1, 0.5}, {0, 2}});
        FAIL("nonconvex polygon accepted");
    } catch (const ValidationError& e) {
        CHECK(e.vertex() == 3);
        CHECK(std::string(e.what()).find("reflex vertex at index 3") != std::string::npos);
    }
    CHECK_THROWS_AS(Polygond({{0, 0}, {1, 0}}), ValidationError);
    CHECK_THROWS_AS(Polygond({{0, 0}, {1, 0}, {2, 0}, {1, 1}}), ValidationError);
    CHECK_THROWS_AS(Polygond({{0, 0}, {1, 0}, {1, 0}, {0, 1}}), ValidationError);
    CHECK_THROWS_AS(Polygond({{0, 0}, {2, 0}, {0, 1}, {2, 1}}), ValidationError);
}

TEST_CASE("polygon JSON")
{
    const Polygond p = parse_polygon_json(R"({"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]})");
    CHECK(p.size() == 4);
    CHECK(parse_polygon_json(polygon_json(p)).area() == doctest::Approx(1.0));
    CHECK(polygon_hash(p) == polygon_hash(parse_polygon_json(polygon_json(p))));
    CHECK(polygon_hash(p) != polygon_hash(rect(1.0, 1.0 + 1e-12)));
    CHECK_THROWS_AS(parse_polygon_json("{"), ParameterError);
    CHECK_THROWS_AS(parse_polygon_json(R"({"points": []})"), ParameterError);
    CHECK_THROWS_AS(parse_polygon_json(R"({"vertices": [[0, 0, 1]]})"), ParameterError);
    CHECK_THROWS_AS(parse_polygon_json(R"({"vertices": [[0, 0], [1, 0], [2, 0]]})"), ValidationError);
}

TEST_CASE("sector radius and regime")
{
    const Polygond sq = unit_square();
    CHECK(sector_radius(sq, std::size_t(0), 0.1) == doctest::Approx(std::sqrt(0.2 / (kPi / 2))));
    CHECK_THROWS_AS(sector_radius(sq, std::size_t(0), 0.4), RegimeError);
    CHECK_THROWS_AS(sector_radius(sq, std::size_t(0), -0.1), RegimeError);
    try {
        sector_radius(sq, std::size_t(0), 0.35);
    } catch (const RegimeError& e) {
        CHECK(e.max_delta() == doctest::Approx(1.0 / kPi));
    }
}

TEST_CASE("sector of measure below delta_bar fits at every smallest-angle vertex")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const Polygond p = random_convex(rng, 3 + trial % 6);
        const auto inv = polygon_invariants(p);
        for (std::size_t v : inv.v_min) {
            const double delta = 0.99 * inv.delta_bar;
            const RegionSpec s = make_vertex_sector(p, v, delta);
            CHECK(std::get<VertexSector>(s.kind).radius <= max_sector_radius(p, v) + 1e-12);
            const RealizedRegion r = realize_region(p, s, 256);
            CHECK(r.measure == doctest::Approx(delta).epsilon(1e-12));
        }
    }
}

TEST_CASE("realized regions")
{
    const Polygond sq = unit_square();
    SUBCASE("sector ratio is sqrt(alpha/2)")
    {
        const RealizedRegion r = realize_region(sq, make_vertex_sector(sq, 2, 0.2), 4096);
        CHECK(r.measure == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(r.ratio() == doctest::Approx(std::sqrt(kPi / 4)).epsilon(1e-6));
        CHECK(r.neumann_length == doctest::Approx(2.0 * std::sqrt(0.4 / (kPi / 2))).epsilon(1e-6));
    }
    SUBCASE("half disk ratio is sqrt(pi/2)")
    {
        const RealizedRegion r = realize_region(sq, make_half_disk(sq, 0, 0.5, 0.1), 4096);
        CHECK(r.measure == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(r.ratio() == doctest::Approx(std::sqrt(kPi / 2)).epsilon(1e-6));
        CHECK_THROWS_AS(make_half_disk(sq, 0, 0.05, 0.1), GeometryError);
    }
    SUBCASE("vertical chord of the square is a slab")
    {
        const RegionSpec s = make_chord_cut(sq, Point2d(0.3, 0.0), Point2d(0.3, 1.0));
        CHECK(s.target_measure == doctest::Approx(0.3).epsilon(1e-14));
        const RealizedRegion r = realize_region(sq, s);
        CHECK(r.relative_perimeter == doctest::Approx(1.0));
        CHECK(r.ratio() == doctest::Approx(1.0 / (2.0 * std::sqrt(0.3))));
        CHECK_THROWS_AS(make_chord_cut(sq, Point2d(0.3, 0.5), Point2d(0.3, 0.0)), GeometryError);
    }
    SUBCASE("membership")
    {
        const RegionSpec s = make_vertex_sector(sq, 0, 0.1);
        const double r = std::get<VertexSector>(s.kind).radius;
        CHECK(region_contains(sq, s, Point2d(0.5 * r, 0.5 * r)));
        CHECK_FALSE(region_contains(sq, s, Point2d(r, 0.1 * r)));
        const ArcGeometry arc = region_arc(sq, s);
        CHECK(arc.sweep == doctest::Approx(kPi / 2));
        CHECK(arc.radius == doctest::Approx(r));
    }
}

TEST_CASE("clipped area is additive across a line")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Polygond p = random_convex(rng, 5);
        const Point2d a(U(rng), U(rng)), b(U(rng), U(rng));
        CHECK(clipped_area(p, a, b) + clipped_area(p, b, a) == doctest::Approx(p.area()).epsilon(1e-12));
    }
}
