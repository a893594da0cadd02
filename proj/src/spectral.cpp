#include "sdlab/spectral.hpp"

#include "sdlab/bessel.hpp"
#include "sdlab/envelopes.hpp"
#include "sdlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace sdlab {

namespace {

double element_mean_square(const Mesh& m, const Eigen::VectorXd& u, std::size_t t)
{
    const auto& tri = m.triangles[t];
    const double a = u[tri[0]], b = u[tri[1]], c = u[tri[2]];
    return (a * a + b * b + c * c + a * b + b * c + c * a) / 6.0;
}

// Fills D along `order` until the next element would overshoot delta; that
// element is kept iff it lands closer to delta.
std::vector<Region> fill_to_measure(const Mesh& m, const std::vector<std::size_t>& order, double delta)
{
    std::vector<Region> region(m.num_triangles(), Region::OutD);
    double measure = 0.0;
    for (std::size_t t : order) {
        const double a = m.triangle_area(t);
        if (measure + a <= delta) {
            region[t] = Region::InD;
            measure += a;
            continue;
        }
        if (std::abs(measure + a - delta) < std::abs(measure - delta))
            region[t] = Region::InD;
        break;
    }
    return region;
}

} // namespace

SpectralDropValue spectral_drop(const Polygond& p, double delta)
{
    const auto inv = polygon_invariants(p);
    if (!(delta > 0.0) || !(delta < inv.delta_bar))
        throw RegimeError("the closed form of SD holds for delta in (0, delta_bar = " + std::to_string(inv.delta_bar) +
                              ")",
                          inv.delta_bar);
    return SpectralDropValue{delta, inv.alpha_min / (2.0 * delta) * kDirichletDisk, true, inv.v_min.front()};
}

SandwichReport sandwich_check(const Polygond& p, double beta, double delta, double epsilon, double od_upper,
                              double fem_tol)
{
    const double area = p.area();
    if (!(delta > 0.0) || !(delta < area))
        throw ParameterError("delta must lie in (0, |Omega|)");
    if (!(beta > delta / (area - delta)))
        throw ParameterError("beta must exceed delta / (|Omega| - delta) = " + std::to_string(delta / (area - delta)));
    const double eps_lo = delta / beta, eps_hi = area - delta;
    if (!(epsilon > eps_lo) || !(epsilon < eps_hi))
        throw ParameterError("epsilon must lie in (" + std::to_string(eps_lo) + ", " + std::to_string(eps_hi) + ")");
    const double delta_bar = polygon_invariants(p).delta_bar;
    if (!(delta + epsilon < delta_bar))
        throw ParameterError("delta + epsilon must stay below delta_bar = " + std::to_string(delta_bar) +
                             "; admissible epsilon interval is (" + std::to_string(eps_lo) + ", " +
                             std::to_string(std::min(eps_hi, delta_bar - delta)) + ")");

    SandwichReport r;
    r.beta = beta;
    r.delta = delta;
    r.epsilon = epsilon;
    r.sd_delta = spectral_drop(p, delta).value;
    r.sd_shifted = spectral_drop(p, delta + epsilon).value;
    r.factor = sandwich_factor(beta, delta, epsilon);
    r.lower_bound = r.sd_shifted * r.factor;
    r.od_upper = od_upper;
    r.fem_tol = fem_tol;
    r.lower_ok = r.lower_bound <= od_upper;
    r.upper_ok = od_upper <= r.sd_delta * (1.0 + fem_tol);
    return r;
}

namespace {

double indicator_area(const Mesh& m, const std::vector<Region>& region)
{
    double a = 0.0;
    for (std::size_t t = 0; t < region.size(); ++t)
        if (region[t] == Region::InD)
            a += m.triangle_area(t);
    return a;
}

} // namespace

std::vector<Region> superlevel_indicator(const Mesh& m, const Eigen::VectorXd& u, double delta)
{
    const std::size_t nt = m.num_triangles();
    std::vector<double> key(nt);
    for (std::size_t t = 0; t < nt; ++t)
        key[t] = element_mean_square(m, u, t);
    std::vector<std::size_t> order(nt);
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
    return fill_to_measure(m, order, delta);
}

std::vector<Region> random_indicator(const Mesh& m, double delta, std::uint64_t seed)
{
    std::vector<std::size_t> order(m.num_triangles());
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::mt19937_64 rng(seed);
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng() % i]);
    return fill_to_measure(m, order, delta);
}

OdResult od_upper_estimate(const Mesh& m, double beta, double delta, const std::vector<Region>& init,
                           const OdOptions& options)
{
    if (init.size() != m.num_triangles())
        throw ParameterError("initial indicator size does not match the mesh");
    if (!(delta > 0.0) || !(delta < m.omega_area))
        throw ParameterError("delta must lie in (0, |Omega|)");
    if (!(beta > delta / (m.omega_area - delta)))
        throw ParameterError("beta must exceed delta / (|Omega| - delta) = " +
                             std::to_string(delta / (m.omega_area - delta)));
    if (options.max_iters < 1)
        throw ParameterError("max_iters must be positive");

    OdResult out;
    std::vector<Region> current = init;

    auto solve_on = [&](const std::vector<Region>& region, double b, const WeightedOptions& wopt) {
        return solve_weighted(assemble(with_indicator(m, region)), b, wopt);
    };

    std::vector<Region> best = current;
    double previous = 0.0;
    for (int it = 0; it < options.max_iters; ++it) {
        WeightedOptions wopt;
        if (it > 0)
            wopt.hint = std::pair{0.8 * previous, 1.01 * previous};
        std::optional<EigenResult> solved;
        if (it > 0 || !options.continuation) {
            try {
                solved = solve_on(current, beta, wopt);
            } catch (const SolverError&) {
                if (it > 0)
                    throw;
            }
        }
        if (!solved) {
            // A scattered initial set can leave no P1 function with positive
            // denominator (lambda = infinity). Warm up along a beta ladder starting
            // just above the admissibility floor, iterating the scheme on each rung.
            for (double rung = 2.0 * delta / (m.omega_area - delta); rung < beta; rung *= 10.0) {
                for (int inner = 0; inner < options.max_iters; ++inner) {
                    auto next = superlevel_indicator(m, solve_on(current, rung, {}).vector, delta);
                    ++out.warmup_steps;
                    if (next == current)
                        break;
                    current = std::move(next);
                }
            }
            try {
                solved = solve_on(current, beta, wopt);
            } catch (const SolverError&) {
            }
            if (!solved)
                throw SolverError("beta continuation did not reach a set with finite eigenvalue");
            best = current;
        }
        const EigenResult& eig = *solved;
        const double measure = indicator_area(m, current);
        out.trace.push_back(eig.value);
        out.measure.push_back(measure);
        if (it == 0 || eig.value < out.value) {
            out.value = eig.value;
            out.best_iter = std::size_t(it);
            best = current;
        }
        if (it > 0) {
            if (eig.value > previous * (1.0 + options.tol)) {
                out.stopped_on_increase = true;
                break;
            }
            if (std::abs(eig.value - previous) < options.tol * eig.value)
                break;
        }
        previous = eig.value;
        std::vector<Region> next = superlevel_indicator(m, eig.vector, delta);
        if (next == current)
            break;
        current = std::move(next);
    }
    for (std::size_t t = 0; t < best.size(); ++t)
        if (best[t] == Region::InD)
            out.region.elements.push_back(t);
    return out;
}

OdStudy od_refine_study(const Polygond& p, double beta, double delta, double h0, int levels, const OdOptions& options)
{
    if (levels < 3)
        throw ParameterError("the optimizer study needs at least 3 levels");
    const SpectralDropValue sd = spectral_drop(p, delta);
    Mesh m = triangulate(p, make_vertex_sector(p, sd.argmin_vertex, delta), h0);
    OdStudy st;
    std::vector<RefineLevel> od, sphere;
    for (int level = 0; level < levels; ++level) {
        if (level > 0)
            m = refine(m);
        OdResult run = od_upper_estimate(m, beta, delta, m.region, options);
        sphere.push_back(RefineLevel{m.h, m.num_triangles(), run.trace.front(), m.in_d_area()});
        od.push_back(RefineLevel{m.h, m.num_triangles(), run.value, run.measure[run.best_iter]});
        st.runs.push_back(std::move(run));
    }
    st.od = richardson(std::move(od));
    st.sphere = richardson(std::move(sphere));
    return st;
}

Admissibility admissibility(const Polygond& p, double beta, double delta)
{
    const auto inv = polygon_invariants(p);
    Admissibility a;
    char buf[256];
    a.weighted = delta > 0.0 && delta < inv.omega_area && beta > delta / (inv.omega_area - delta);
    a.sector_floor = delta > 0.0 && delta < inv.delta_bar && beta > sector_beta_floor(delta, inv.delta_bar);
    a.ratio_measure = delta > 0.0 && delta < ratio_delta_ceiling(beta, inv.delta_bar);
    std::string why;
    if (!a.weighted)
        why += "; need 0 < delta < |Omega| and beta > delta/(|Omega|-delta)";
    if (!a.sector_floor) {
        std::snprintf(buf, sizeof buf, "; need delta < delta_bar=%.6g and beta > max((delta/(delta_bar-delta))^3, 1)",
                      inv.delta_bar);
        why += buf;
    }
    if (!a.ratio_measure) {
        std::snprintf(buf, sizeof buf, "; need delta < beta^(1/3) delta_bar/(beta^(1/3)+1) = %.6g",
                      ratio_delta_ceiling(beta, inv.delta_bar));
        why += buf;
    }
    if (!why.empty()) {
        std::snprintf(buf, sizeof buf, "beta=%g, delta=%g", beta, delta);
        a.reason = buf + why;
    }
    return a;
}

std::vector<BoundsReport> ratio_report(const Polygond& p, const std::vector<double>& betas, double delta,
                                       const RatioOptions& options)
{
    for (double beta : betas) {
        const Admissibility a = admissibility(p, beta, delta);
        if (!a.ok())
            throw ParameterError(a.reason);
    }
    std::vector<BoundsReport> out(betas.size());
    OdOptions od_options;
    od_options.max_iters = options.max_iters;
    parallel_for(betas.size(), options.jobs, [&](std::size_t i) {
        BoundsReport& r = out[i];
        r.beta = betas[i];
        r.delta = delta;
        r.study = od_refine_study(p, r.beta, delta, options.h0, options.levels, od_options);
        r.od_upper = r.study.od.extrapolated;
        r.lambda_sphere = r.study.sphere.extrapolated;
        r.fem_tol = options.tol ? *options.tol
                                : std::max({1e-3, r.study.od.error_estimate / std::abs(r.od_upper),
                                            r.study.sphere.error_estimate / std::abs(r.lambda_sphere)});

        r.epsilon = balanced_epsilon(r.beta, delta);
        const SandwichReport s = sandwich_check(p, r.beta, delta, r.epsilon, r.od_upper, r.fem_tol);
        r.sd_delta = s.sd_delta;
        r.sd_shifted = s.sd_shifted;
        r.sandwich_lower = s.lower_bound;
        r.sandwich_ok = s.lower_ok;

        r.lower_envelope = lower_envelope(r.beta);
        r.upper_ratio_envelope = upper_ratio_envelope(r.beta);
        r.majorant_bound = majorant_polynomial(r.beta);
        r.ratio_od_sd = r.od_upper / r.sd_delta;
        r.ratio_sphere_od = r.lambda_sphere / r.od_upper;
        r.slack_od_sd = std::min(r.ratio_od_sd - r.lower_envelope, 1.0 + r.fem_tol - r.ratio_od_sd);
        r.slack_sphere_od = std::min(r.ratio_sphere_od - (1.0 - r.fem_tol), r.upper_ratio_envelope - r.ratio_sphere_od);
        r.od_sd_ok = r.ratio_od_sd > r.lower_envelope && r.ratio_od_sd <= 1.0 + r.fem_tol;
        r.sphere_od_ok = r.ratio_sphere_od >= 1.0 - r.fem_tol && r.ratio_sphere_od < r.upper_ratio_envelope;
        r.majorant_ok = !(r.beta > 8.0) || r.upper_ratio_envelope <= r.majorant_bound;
    });
    return out;
}

bool approaches_one(const std::vector<BoundsReport>& reports)
{
    std::vector<const BoundsReport*> sorted;
    for (const auto& r : reports)
        sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->beta < b->beta; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const BoundsReport& r = *sorted[i];
        if (std::abs(1.0 - r.ratio_od_sd) > (1.0 - r.lower_envelope) + r.fem_tol)
            return false;
        if (i > 0 && r.ratio_od_sd < sorted[i - 1]->ratio_od_sd - r.fem_tol)
            return false;
    }
    return true;
}

} // namespace sdlab
