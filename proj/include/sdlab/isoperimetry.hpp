#pragma once

#include "sdlab/geometry.hpp"

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace sdlab {

// Configuration families for relative isoperimetric minimizers:
// A vertex sectors, B regions resting on a single edge, C straight chords
// joining two non-consecutive edges.
enum class Family { VertexSector, SameEdge, CrossChord };

std::string_view family_name(Family f);

struct IsoperimetricCandidate {
    RegionSpec spec;
    Family family;
    double measure;
    double perimeter;
    double ratio; // P(D, Ω) / (2 |D|^{1/2})
};

// Every sampled member of one family; best is empty when nothing fits.
struct FamilySweep {
    Family family;
    std::vector<IsoperimetricCandidate> candidates;
    std::optional<std::size_t> best;

    bool empty() const { return !best.has_value(); }
    const IsoperimetricCandidate& best_candidate() const { return candidates.at(*best); }
};

/// sqrt(alpha / 2): the radius-independent ratio of any sector in the cone of opening alpha.
double sector_ratio(double alpha);

/// Samples one family at measure delta. For B and C, samples is the number of
/// positions per edge; A evaluates one sector per admissible vertex.
FamilySweep best_in_family(const Polygond& p, double delta, Family family, int samples = 128, int arc_segments = 1024);

struct IsoperimetricProfile {
    double I;
    double K;
    IsoperimetricCandidate argmin;
    FamilySweep same_edge;
    FamilySweep cross_chord;
    double margin_same_edge;   // best B ratio minus I (infinite when B is empty)
    double margin_cross_chord; // best C ratio minus I
    double bound_same_edge;    // sqrt(pi/2) - sqrt(alpha_min/2)
    double bound_cross_chord;  // d / (2 sqrt(delta)) - sqrt(alpha_min/2)
};

/// Profile value I(Ω, delta) for delta < delta_bar, its running infimum K and the
/// dominance margins of families B and C. Family-A ratios are refined by doubling
/// arc segments until they settle below 1e-9; B/C sampling doubles from 128
/// until the family minimum moves by less than 1e-6.
/// Throws RegimeError when delta >= delta_bar and InvariantError if B or C
/// does not strictly dominate A.
IsoperimetricProfile isoperimetric_profile(const Polygond& p, double delta);

// Family-A value with doubling arc refinement.
double refined_sector_ratio(const Polygond& p, std::size_t vertex, double delta);

void write_candidates_csv(std::ostream& os, const std::vector<FamilySweep>& sweeps);

} // namespace sdlab
