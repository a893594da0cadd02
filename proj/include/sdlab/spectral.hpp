#pragma once

#include "sdlab/fem.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sdlab {

struct SpectralDropValue {
    double delta;
    double value;
    bool regime_ok;
    std::size_t argmin_vertex;
};

/// SD(delta) = alpha_min (2 delta)^{-1} j01^2, attained by the sector at a smallest-angle vertex.
/// Throws RegimeError for delta outside (0, delta_bar).
SpectralDropValue spectral_drop(const Polygond& p, double delta);

struct SandwichReport {
    double beta, delta, epsilon;
    double sd_delta;
    double sd_shifted; // SD(delta + epsilon)
    double factor;     // (1 - sqrt(delta / (epsilon beta)))^2
    double lower_bound;
    double od_upper;
    double fem_tol;
    bool lower_ok; // lower_bound <= od_upper, no tolerance
    bool upper_ok; // od_upper <= SD(delta) (1 + fem_tol)
};

/// Evaluates SD(delta + eps) (1 - sqrt(delta/(eps beta)))^2 <= od_upper <= SD(delta).
/// Throws ParameterError naming the admissible epsilon interval when eps is out of range.
SandwichReport sandwich_check(const Polygond& p, double beta, double delta, double epsilon, double od_upper,
                              double fem_tol);

struct OdOptions {
    int max_iters = 50;
    double tol = 1e-8; // relative change of lambda that counts as converged
    // Run the scheme along beta = 2 beta_min, 20 beta_min, ... before the target beta.
    // Also used whenever the initial set has no finite eigenvalue.
    bool continuation = false;
};

struct OdResult {
    double value = 0.0;          // smallest lambda seen: an upper estimate of OD
    MeshIndicator region;        // the set attaining value
    std::vector<double> trace;   // lambda per iteration
    std::vector<double> measure; // |D| per iteration
    std::size_t best_iter = 0;
    int warmup_steps = 0;        // beta-continuation rungs needed before the first finite lambda
    bool stopped_on_increase = false;
};

/// Alternating scheme on a fixed mesh: solve the weighted problem on D, then take
/// as the next D the elements with the largest mean u^2 until the measure reaches
/// delta (the last element kept only if that lands closer to delta).
OdResult od_upper_estimate(const Mesh& m, double beta, double delta, const std::vector<Region>& init,
                           const OdOptions& options = {});

/// Measure-delta element set drawn uniformly at random (Fisher-Yates order, greedy fill).
std::vector<Region> random_indicator(const Mesh& m, double delta, std::uint64_t seed);

// The thresholding step on its own: elements ranked by mean u^2, filled to delta.
std::vector<Region> superlevel_indicator(const Mesh& m, const Eigen::VectorXd& u, double delta);

struct OdStudy {
    RefineStudy od;     // trace minima per level
    RefineStudy sphere; // lambda of the initial sector per level
    std::vector<OdResult> runs;
};

/// Sector-resolved mesh at a smallest-angle vertex, refined levels-1 times; the
/// optimizer starts from the sector on every level.
OdStudy od_refine_study(const Polygond& p, double beta, double delta, double h0, int levels,
                        const OdOptions& options = {});

struct Admissibility {
    bool weighted = false;    // beta > delta / (|Omega| - delta)
    bool sector_floor = false; // beta > max((delta/(delta_bar - delta))^3, 1)
    bool ratio_measure = false; // delta < beta^{1/3} delta_bar / (beta^{1/3} + 1)
    std::string reason;        // empty when all hold
    bool ok() const { return weighted && sector_floor && ratio_measure; }
};

Admissibility admissibility(const Polygond& p, double beta, double delta);

struct BoundsReport {
    double beta = 0.0, delta = 0.0, epsilon = 0.0;
    double sd_delta = 0.0, sd_shifted = 0.0, sandwich_lower = 0.0;
    double lambda_sphere = 0.0; // extrapolated lambda(beta, sector)
    double od_upper = 0.0;      // extrapolated optimizer value
    double lower_envelope = 0.0, upper_ratio_envelope = 0.0, majorant_bound = 0.0;
    double fem_tol = 0.0;
    double ratio_od_sd = 0.0, ratio_sphere_od = 0.0;
    double slack_od_sd = 0.0, slack_sphere_od = 0.0;
    bool od_sd_ok = false, sphere_od_ok = false, sandwich_ok = false, majorant_ok = false;
    OdStudy study;

    bool ok() const { return od_sd_ok && sphere_od_ok && sandwich_ok && majorant_ok; }
};

struct RatioOptions {
    double h0 = 0.05;
    int levels = 3;
    int max_iters = 50;
    std::optional<double> tol; // FEM tolerance; default max(1e-3, Richardson estimate)
    int jobs = 1;
};

/// One report per beta (grid order). Every beta must pass admissibility().
std::vector<BoundsReport> ratio_report(const Polygond& p, const std::vector<double>& betas, double delta,
                                       const RatioOptions& options = {});

/// Along increasing beta, od/SD does not decrease by more than the FEM tolerance
/// and |1 - od/SD| stays within the envelope width 1 - lower_envelope.
bool approaches_one(const std::vector<BoundsReport>& reports);

} // namespace sdlab
