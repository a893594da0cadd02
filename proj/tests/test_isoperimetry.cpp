#include "support.hpp"

#include "sdlab/isoperimetry.hpp"

#include <doctest.h>

#include <sstream>

using namespace sdlab;
using namespace sdlab::test;

TEST_CASE("sector ratio depends only on the opening")
{
    const Polygond sq = unit_square();
    for (double delta : {0.01, 0.1, 0.3})
        CHECK(refined_sector_ratio(sq, 1, delta) == doctest::Approx(std::sqrt(kPi / 4)).epsilon(1e-9));
    CHECK(sector_ratio(kPi) == doctest::Approx(std::sqrt(kPi / 2)));
}

TEST_CASE("profile is flat below delta_bar")
{
    for (const Polygond& p : {unit_square(), rect(2.0, 1.0), equilateral()}) {
        const auto inv = polygon_invariants(p);
        for (double f : {0.15, 0.5, 0.85}) {
            const auto prof = isoperimetric_profile(p, f * inv.delta_bar);
            CHECK(std::abs(prof.I - sector_ratio(inv.alpha_min)) < 1e-6);
            CHECK(prof.K == doctest::Approx(prof.I).epsilon(1e-9));
            CHECK(prof.margin_same_edge >= prof.bound_same_edge - 1e-6);
            CHECK(prof.margin_cross_chord >= prof.bound_cross_chord - 1e-6);
            CHECK(prof.margin_same_edge > 0.0);
            CHECK(prof.margin_cross_chord > 0.0);
        }
    }
}

TEST_CASE("profile on random convex polygons")
{
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 6; ++trial) {
        const Polygond p = random_convex(rng, 3 + trial);
        const auto inv = polygon_invariants(p);
        const auto prof = isoperimetric_profile(p, 0.6 * inv.delta_bar);
        CHECK(std::abs(prof.I - sector_ratio(inv.alpha_min)) < 1e-6);
        CHECK(std::get<VertexSector>(prof.argmin.spec.kind).vertex < p.size());
        CHECK(p.angle(std::get<VertexSector>(prof.argmin.spec.kind).vertex) ==
              doctest::Approx(inv.alpha_min).epsilon(1e-9));
    }
}

TEST_CASE("profile regime")
{
    const Polygond sq = unit_square();
    CHECK_THROWS_AS(isoperimetric_profile(sq, 1.0 / kPi), RegimeError);
    CHECK_THROWS_AS(isoperimetric_profile(sq, 0.0), RegimeError);
}

TEST_CASE("half disks attain sqrt(pi/2) wherever they fit")
{
    const FamilySweep s = best_in_family(rect(3.0, 1.0), 0.1, Family::SameEdge, 64, 2048);
    REQUIRE_FALSE(s.empty());
    for (const auto& c : s.candidates) {
        CHECK(c.measure == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(c.ratio == doctest::Approx(std::sqrt(kPi / 2)).epsilon(1e-6));
    }
    CHECK(best_in_family(unit_square(), 0.9, Family::SameEdge).empty());
}

TEST_CASE("shortest cross chord of a strip is the width")
{
    // Slab oracle: chords between the long edges have length >= 1, with equality for the vertical one.
    const Polygond p = rect(3.0, 1.0);
    for (double delta : {0.05, 0.2}) {
        const FamilySweep s = best_in_family(p, delta, Family::CrossChord, 256);
        REQUIRE_FALSE(s.empty());
        const double slab = 1.0 / (2.0 * std::sqrt(delta));
        CHECK(s.best_candidate().ratio >= slab * (1.0 - 1e-9));
        CHECK(s.best_candidate().ratio <= slab * (1.0 + 1e-3));
        for (const auto& c : s.candidates)
            CHECK(c.measure == doctest::Approx(delta).epsilon(1e-9));
    }
}

TEST_CASE("candidate CSV lists every family")
{
    const Polygond sq = unit_square();
    std::vector<FamilySweep> sweeps;
    for (Family f : {Family::VertexSector, Family::SameEdge, Family::CrossChord})
        sweeps.push_back(best_in_family(sq, 0.1, f, 16, 64));
    std::ostringstream os;
    write_candidates_csv(os, sweeps);
    const std::string s = os.str();
    CHECK(s.rfind("family,", 0) == 0);
    CHECK(s.find("\nA,") != std::string::npos);
    CHECK(s.find("\nB,") != std::string::npos);
    CHECK(s.find("\nC,") != std::string::npos);
}
