// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "sdlab/bessel.hpp"
#include "sdlab/cli.hpp"
#include "sdlab/envelopes.hpp"
#include "sdlab/isoperimetry.hpp"
#include "sdlab/spectral.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace sdlab;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

Polygond square() { return Polygond({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }
Polygond rect2x1() { return Polygond({{0, 0}, {2, 0}, {2, 1}, {0, 1}}); }
Polygond triangle() { return Polygond({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2.0}}); }

struct Outcome {
    bool pass;
    std::string detail;
};

std::string printf_str(const char* format, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

Outcome ac1()
{
    const auto sq = polygon_invariants(square());
    const auto tri = polygon_invariants(triangle());
    const double e_alpha = std::abs(sq.alpha_min - kPi / 2), e_d = std::abs(sq.d - 1.0);
    const double e_sq = std::abs(sq.delta_bar - 1.0 / kPi), e_tri = std::abs(tri.delta_bar - 9.0 / (8.0 * kPi));
    const bool ok = e_alpha <= 1e-12 && e_d <= 1e-12 && e_sq <= 1e-12 && e_tri <= 1e-12 && tri.delta_bar > 0.0 &&
                    tri.delta_bar < tri.omega_area;
    return {ok, printf_str("square |da|=%.1e |dd|=%.1e |ddbar|=%.1e; triangle delta_bar=%.15f |err|=%.1e < |Omega|=%.6f",
                           e_alpha, e_d, e_sq, tri.delta_bar, e_tri, tri.omega_area)};
}

Outcome ac2()
{
    double worst_i = 0.0, slack_b = 1e300, slack_c = 1e300, min_margin = 1e300;
    for (const Polygond& p : {square(), rect2x1(), triangle()}) {
        const auto inv = polygon_invariants(p);
        for (int k = 0; k < 10; ++k) {
            const double delta = inv.delta_bar * (0.1 + 0.8 * (k + 0.5) / 10.0);
            const auto prof = isoperimetric_profile(p, delta);
            worst_i = std::max(worst_i, std::abs(prof.I - sector_ratio(inv.alpha_min)));
            slack_b = std::min(slack_b, prof.margin_same_edge - prof.bound_same_edge);
            slack_c = std::min(slack_c, prof.margin_cross_chord - prof.bound_cross_chord);
            min_margin = std::min({min_margin, prof.margin_same_edge, prof.margin_cross_chord});
        }
    }
    // margins inherit the 1e-6 resolution of I
    const bool ok = worst_i <= 1e-6 && min_margin > 0.0 && slack_b >= -1e-6 && slack_c >= -1e-6;
    return {ok, printf_str("max |I - sqrt(alpha_min/2)|=%.2e; min margin %.4g; margin-bound slack B %.2e, C %.2e",
                           worst_i, min_margin, slack_b, slack_c)};
}

Outcome ac3()
{
    const Polygond sq = square();
    const RefineStudy st = refine_study(sq, make_vertex_sector_radius(sq, 0, 0.5), Problem{}, 4, 0.1);
    const double exact = kDirichletDisk / 0.25;
    const double rel = std::abs(st.extrapolated - exact) / exact;
    const std::size_t tris = st.levels.back().triangles;
    const bool ok = rel <= 1e-3 && st.order >= 1.7 && st.order <= 2.3 && tris <= 50000;
    return {ok, printf_str("extrapolated %.6f vs %.6f (rel %.1e), order %.3f, finest %zu triangles", st.extrapolated,
                           exact, rel, st.order, tris)};
}

Outcome ac4()
{
    double worst = 0.0;
    std::string where;
    const std::vector<std::pair<const char*, Polygond>> polys{{"square", square()},
                                                              {"rect2x1", rect2x1()},
                                                              {"triangle", triangle()}};
    for (const auto& [name, p] : polys) {
        const auto inv = polygon_invariants(p);
        for (double f : {0.25, 0.5, 0.75}) {
            const double delta = f * inv.delta_bar;
            const RefineStudy st =
                refine_study(p, make_vertex_sector(p, inv.v_min.front(), delta), Problem{}, 4, 0.1);
            const double sd = spectral_drop(p, delta).value;
            const double rel = std::abs(st.extrapolated - sd) / sd;
            if (rel >= worst) {
                worst = rel;
                where = printf_str("%s delta=%.4g: FEM %.6f vs SD %.6f", name, delta, st.extrapolated, sd);
            }
        }
    }
    return {worst <= 5e-3, printf_str("worst rel deviation %.2e (%s)", worst, where.c_str())};
}

Outcome ac5()
{
    const Polygond sq = square();
    const std::vector<std::pair<const char*, RegionSpec>> specs{
        {"sector", make_vertex_sector(sq, 0, 0.1)},
        {"half-disk", make_half_disk(sq, 0, 0.5, 0.1)},
        {"chord", make_chord_cut(sq, Point2d(0.3, 0.0), Point2d(0.3, 1.0))}};
    bool ok = true;
    std::string detail;
    for (const auto& [name, spec] : specs) {
        const Mesh m = refine(triangulate(sq, spec, 0.05));
        const AssembledSystem sys = assemble(m);
        const double mu = solve_mixed(sys, m).value;
        double gap = 1e300;
        for (double beta : {10.0, 1e3, 1e6}) {
            const double lambda = solve_weighted(sys, beta).value;
            ok = ok && lambda <= mu;
            gap = std::min(gap, mu - lambda);
        }
        const double lo = std::max(2.0 * beta_admissibility_floor(sys), 1.0);
        double prev = 0.0, min_step = 1e300;
        for (int k = 0; k < 12; ++k) {
            const double beta = lo * std::pow(1e8 / lo, k / 11.0);
            const double lambda = solve_weighted(sys, beta).value;
            ok = ok && lambda >= prev && lambda <= mu;
            if (k > 0)
                min_step = std::min(min_step, lambda - prev);
            prev = lambda;
        }
        detail += printf_str("%s: min(mu-lambda)=%.3g, min step=%.3g; ", name, gap, min_step);
    }
    return {ok, detail};
}

Outcome ac6()
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const Polygond sq = square();
    const Mesh base = triangulate(sq, std::nullopt, 0.1);
    double worst = 0.0;
    int done = 0, attempts = 0;
    std::size_t max_dof = 0;
    while (done < 10 && attempts < 100) {
        ++attempts;
        const Point2d c(U(rng), U(rng));
        const double r = 0.15 + 0.25 * U(rng);
        std::vector<Region> tags(base.num_triangles(), Region::OutD);
        for (std::size_t t = 0; t < tags.size(); ++t) {
            const auto& tri = base.triangles[t];
            const Point2d g = (base.nodes[tri[0]] + base.nodes[tri[1]] + base.nodes[tri[2]]) / 3.0;
            if ((g - c).norm() < r)
                tags[t] = Region::InD;
        }
        const Mesh m = with_indicator(base, tags);
        if (m.in_d_area() == 0.0 || m.in_d_area() > 0.5)
            continue;
        const AssembledSystem sys = assemble(m);
        const double floor = beta_admissibility_floor(sys);
        const double beta = 2.0 * floor * std::pow(1e6 / (2.0 * floor), U(rng));
        WeightedOptions opt;
        opt.allow_dense_fallback = false;
        const double sparse = solve_weighted(sys, beta, opt).value;
        const double dense = solve_weighted_dense(sys, beta).value;
        worst = std::max(worst, std::abs(sparse - dense) / dense);
        max_dof = std::max<std::size_t>(max_dof, std::size_t(sys.size()));
        ++done;
    }
    return {done == 10 && worst <= 1e-9 && max_dof <= 600,
            printf_str("%d instances, %zu DOF, worst rel difference %.2e", done, max_dof, worst)};
}

std::vector<BoundsReport> g_reports;

Outcome ac7()
{
    RatioOptions opt;
    opt.h0 = 0.05;
    opt.levels = 3;
    opt.tol = 0.01;
    g_reports = ratio_report(square(), {1e3, 1e4, 1e5, 1e6}, 0.1, opt);
    bool ok = approaches_one(g_reports);
    std::string detail;
    for (const auto& r : g_reports) {
        ok = ok && r.ratio_od_sd > r.lower_envelope && r.ratio_od_sd <= 1.0 + 0.01;
        detail += printf_str("beta=%g: %.6f in (%.6f, 1.01]; ", r.beta, r.ratio_od_sd, r.lower_envelope);
    }
    const double env = lower_envelope(1e6);
    ok = ok && std::abs(env - 0.970396) < 5e-7;
    return {ok, detail + printf_str("envelope(1e6)=%.6f, monotone approach %s", env,
                                    approaches_one(g_reports) ? "yes" : "no")};
}

Outcome ac8()
{
    bool ok = !g_reports.empty();
    std::string detail;
    for (const auto& r : g_reports) {
        ok = ok && r.ratio_sphere_od >= 1.0 - 0.01 && r.ratio_sphere_od < r.upper_ratio_envelope;
        detail += printf_str("beta=%g: %.6f in [0.99, %.6f); ", r.beta, r.ratio_sphere_od, r.upper_ratio_envelope);
    }
    const double env = upper_ratio_envelope(1e6);
    ok = ok && std::abs(env - 1.030507) < 5e-7;
    return {ok, detail + printf_str("envelope(1e6)=%.6f", env)};
}

Outcome ac9()
{
    using Rational = boost::multiprecision::cpp_rational;
    int held = 0;
    double min_gap = 1e300;
    for (int k = 1; k <= 100; ++k) {
        const double beta = 8.0 * std::pow(1e8 / 8.0, k / 100.0);
        const double t = beta_t(beta);
        const Rational q(t);
        // (1+t)(1-t)^{-2} <= 1 + 15t + 14t^2  <=>  1 + t <= (1 + 15t + 14t^2)(1-t)^2 for t < 1
        const bool exact = t < 1.0 && 1 + q <= (1 + 15 * q + 14 * q * q) * (1 - q) * (1 - q);
        held += exact && upper_ratio_envelope(beta) <= majorant_polynomial(beta);
        min_gap = std::min(min_gap, majorant_polynomial(beta) - upper_ratio_envelope(beta));
    }
    return {held == 100, printf_str("%d/100 points hold exactly, smallest gap %.3e", held, min_gap)};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome ac10()
{
    const fs::path root = fs::temp_directory_path() / "sdlab-acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path poly = root / "square.json";
    std::ofstream(poly) << R"({"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]})";
    std::vector<std::string> files{"bounds.csv", "bounds_levels.csv"};
    std::string codes;
    for (const char* run : {"a", "b"}) {
        std::ostringstream out, err;
        const int code = run_cli({"verify", "--polygon", poly.string(), "--delta", "0.1", "--beta", "1e3,1e4,1e5,1e6",
                                  "--h", "0.05", "--levels", "3", "--seed", "7", "--out", (root / run).string()},
                                 out, err);
        codes += std::to_string(code);
    }
    bool same = codes == "00";
    std::size_t bytes = 0;
    for (const auto& f : files) {
        const std::string a = slurp(root / "a" / f), b = slurp(root / "b" / f);
        same = same && !a.empty() && a == b;
        bytes += a.size();
    }
    return {same, printf_str("exit codes %s, %zu bytes compared across %zu CSVs", codes.c_str(), bytes, files.size())};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"geometry ground truth", ac1},
        {"isoperimetric constancy and family dominance", ac2},
        {"mixed FEM against the Bessel value", ac3},
        {"closed-form SD against extrapolated FEM", ac4},
        {"discrete orderings lambda <= mu and beta-monotonicity", ac5},
        {"sparse solver against dense pencil", ac6},
        {"OD/SD envelope", ac7},
        {"sector/OD envelope", ac8},
        {"polynomial majorant", ac9},
        {"verify determinism", ac10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::printf("AC%-2zu %s  %s: %s [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria pass\n", criteria.size() - failed, criteria.size());
    return failed ? 1 : 0;
}
