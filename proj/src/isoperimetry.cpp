#include "sdlab/isoperimetry.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

namespace sdlab {

namespace {

constexpr double kPi = std::numbers::pi;

void pick_best(FamilySweep& sweep)
{
    for (std::size_t i = 0; i < sweep.candidates.size(); ++i)
        if (!sweep.best || sweep.candidates[i].ratio < sweep.candidates[*sweep.best].ratio)
            sweep.best = i;
}

IsoperimetricCandidate from_realized(const RegionSpec& spec, Family family, const RealizedRegion& r)
{
    return IsoperimetricCandidate{spec, family, r.measure, r.relative_perimeter, r.ratio()};
}

void sweep_sectors(const Polygond& p, double delta, int arc_segments, FamilySweep& out)
{
    for (std::size_t v = 0; v < p.size(); ++v) {
        if (delta > max_sector_delta(p, v))
            continue;
        const RegionSpec spec{VertexSector{v, std::sqrt(2.0 * delta / p.angle(v))}, delta};
        out.candidates.push_back(from_realized(spec, Family::VertexSector, realize_region(p, spec, arc_segments)));
    }
}

void sweep_half_disks(const Polygond& p, double delta, int samples, int arc_segments, FamilySweep& out)
{
    const double rho = std::sqrt(2.0 * delta / kPi);
    // realize_region inflates the radius so the inscribed polygon has measure delta
    const double rho_n = std::sqrt(2.0 * delta / (arc_segments * std::sin(kPi / arc_segments)));
    for (std::size_t e = 0; e < p.size(); ++e) {
        const double len = p.edge_length(e);
        if (len < 2.0 * rho_n)
            continue;
        for (int j = 0; j < samples; ++j) {
            const double s = rho_n + (len - 2.0 * rho_n) * j / (samples - 1);
            if (!half_disk_fits(p, e, s, rho_n))
                continue;
            const RegionSpec spec{SameEdgeArc{e, s, rho}, delta};
            out.candidates.push_back(from_realized(spec, Family::SameEdge, realize_region(p, spec, arc_segments)));
        }
    }
}

bool adjacent_edges(std::size_t n, std::size_t i, std::size_t j)
{
    return i == j || (i + 1) % n == j || (j + 1) % n == i;
}

void sweep_chords(const Polygond& p, double delta, int samples, FamilySweep& out)
{
    const std::size_t n = p.size();
    const double tol = 1e-12 * p.area();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (adjacent_edges(n, i, j))
                continue;
            const Point2d ej0 = p.edge_start(j);
            const Point2d ej = p.edge_end(j) - ej0;
            for (int k = 0; k < samples; ++k) {
                const Point2d P = p.edge_start(i) + ((k + 0.5) / samples) * (p.edge_end(i) - p.edge_start(i));
                // Area left of P -> Q(s) decreases as Q advances counterclockwise along e_j.
                auto area = [&](double s) { return clipped_area(p, P, ej0 + s * ej); };
                double lo = 0.0, hi = 1.0;
                const double a_lo = area(lo), a_hi = area(hi);
                if (delta > a_lo + tol || delta < a_hi - tol)
                    continue;
                double s = 0.5;
                for (int it = 0; it < 200; ++it) {
                    s = 0.5 * (lo + hi);
                    const double a = area(s);
                    if (std::abs(a - delta) <= tol)
                        break;
                    (a > delta ? lo : hi) = s;
                }
                const Point2d Q = ej0 + s * ej;
                const double measure = area(s);
                const double perimeter = (Q - P).norm();
                out.candidates.push_back(IsoperimetricCandidate{RegionSpec{ChordCut{P, Q}, measure}, Family::CrossChord,
                                                                measure, perimeter,
                                                                perimeter / (2.0 * std::sqrt(measure))});
            }
        }
    }
}

// Doubles samples from 128 until the family minimum moves by less than 1e-6.
FamilySweep converged_sweep(const Polygond& p, double delta, Family family)
{
    int samples = 128;
    FamilySweep sweep = best_in_family(p, delta, family, samples);
    for (int round = 0; round < 5 && !sweep.empty(); ++round) {
        samples *= 2;
        FamilySweep finer = best_in_family(p, delta, family, samples);
        const double change = std::abs(finer.best_candidate().ratio - sweep.best_candidate().ratio);
        sweep = std::move(finer);
        if (change < 1e-6)
            break;
    }
    return sweep;
}

} // namespace

std::string_view family_name(Family f)
{
    switch (f) {
    case Family::VertexSector:
        return "A";
    case Family::SameEdge:
        return "B";
    case Family::CrossChord:
        return "C";
    }
    return "?";
}

double sector_ratio(double alpha)
{
    if (!(alpha > 0.0) || !(alpha <= kPi))
        throw ParameterError("sector opening must lie in (0, pi]");
    return std::sqrt(alpha / 2.0);
}

FamilySweep best_in_family(const Polygond& p, double delta, Family family, int samples, int arc_segments)
{
    if (samples < 16)
        throw ParameterError("family sweeps need at least 16 samples");
    if (!(delta > 0.0) || !(delta < p.area()))
        throw ParameterError("delta must lie in (0, |Omega|)");
    FamilySweep sweep{family, {}, std::nullopt};
    switch (family) {
    case Family::VertexSector:
        sweep_sectors(p, delta, arc_segments, sweep);
        break;
    case Family::SameEdge:
        sweep_half_disks(p, delta, samples, arc_segments, sweep);
        break;
    case Family::CrossChord:
        sweep_chords(p, delta, samples, sweep);
        break;
    }
    pick_best(sweep);
    return sweep;
}

double refined_sector_ratio(const Polygond& p, std::size_t vertex, double delta)
{
    const RegionSpec spec{VertexSector{vertex, std::sqrt(2.0 * delta / p.angle(vertex))}, delta};
    double previous = realize_region(p, spec, 64).ratio();
    for (int n = 128; n <= (1 << 16); n *= 2) {
        const double current = realize_region(p, spec, n).ratio();
        if (std::abs(current - previous) < 1e-9)
            return current;
        previous = current;
    }
    return previous;
}

IsoperimetricProfile isoperimetric_profile(const Polygond& p, double delta)
{
    const auto inv = polygon_invariants(p);
    if (!(delta > 0.0) || !(delta < inv.delta_bar))
        throw RegimeError("isoperimetric profile is only resolved for delta in (0, delta_bar)", inv.delta_bar);

    auto best_sector = [&](double measure) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_vertex = 0;
        for (std::size_t v = 0; v < p.size(); ++v) {
            if (measure > max_sector_delta(p, v))
                continue;
            const double r = refined_sector_ratio(p, v, measure);
            if (r < best) {
                best = r;
                best_vertex = v;
            }
        }
        return std::pair{best, best_vertex};
    };

    IsoperimetricProfile prof;
    const auto [I, vertex] = best_sector(delta);
    prof.I = I;
    const RegionSpec spec{VertexSector{vertex, std::sqrt(2.0 * delta / p.angle(vertex))}, delta};
    const auto realized = realize_region(p, spec, 4096);
    prof.argmin = IsoperimetricCandidate{spec, Family::VertexSector, realized.measure, realized.relative_perimeter, I};

    prof.K = I;
    for (int k = 1; k < 10; ++k)
        prof.K = std::min(prof.K, best_sector(delta * k / 10.0).first);

    prof.same_edge = converged_sweep(p, delta, Family::SameEdge);
    prof.cross_chord = converged_sweep(p, delta, Family::CrossChord);
    const double inf = std::numeric_limits<double>::infinity();
    prof.margin_same_edge = prof.same_edge.empty() ? inf : prof.same_edge.best_candidate().ratio - prof.I;
    prof.margin_cross_chord = prof.cross_chord.empty() ? inf : prof.cross_chord.best_candidate().ratio - prof.I;
    const double cone = sector_ratio(inv.alpha_min);
    prof.bound_same_edge = std::sqrt(kPi / 2.0) - cone;
    prof.bound_cross_chord = inv.d / (2.0 * std::sqrt(delta)) - cone;

    if (!(prof.margin_same_edge > 0.0) || !(prof.margin_cross_chord > 0.0))
        throw InvariantError("vertex sectors do not strictly dominate families B and C at delta = " +
                             std::to_string(delta));
    return prof;
}

void write_candidates_csv(std::ostream& os, const std::vector<FamilySweep>& sweeps)
{
    os << "family,p1,p2,p3,p4,measure,perimeter,ratio\n";
    char buf[512];
    for (const auto& sweep : sweeps) {
        for (const auto& c : sweep.candidates) {
            double q[4] = {0, 0, 0, 0};
            if (const auto* s = std::get_if<VertexSector>(&c.spec.kind)) {
                q[0] = double(s->vertex);
                q[1] = s->radius;
            } else if (const auto* s = std::get_if<SameEdgeArc>(&c.spec.kind)) {
                q[0] = double(s->edge);
                q[1] = s->center;
                q[2] = s->radius;
            } else if (const auto* s = std::get_if<ChordCut>(&c.spec.kind)) {
                q[0] = s->from.x();
                q[1] = s->from.y();
                q[2] = s->to.x();
                q[3] = s->to.y();
            }
            std::snprintf(buf, sizeof buf, "%s,%.12g,%.12g,%.12g,%.12g,%.15g,%.15g,%.15g\n",
                          family_name(c.family).data(), q[0], q[1], q[2], q[3], c.measure, c.perimeter, c.ratio);
            os << buf;
        }
    }
}

} // namespace sdlab
