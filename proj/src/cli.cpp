#include "sdlab/cli.hpp"

#include "sdlab/bessel.hpp"
#include "sdlab/envelopes.hpp"
#include "sdlab/io.hpp"
#include "sdlab/isoperimetry.hpp"
#include "sdlab/parallel.hpp"
#include "sdlab/spectral.hpp"
#include "sdlab/svg.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

namespace sdlab {

namespace {

namespace fs = std::filesystem;

struct Common {
    std::string polygon;
    std::string out = "sdlab-out";
    int jobs = default_jobs();
    std::uint64_t seed = 1;
};

struct VerifyArgs {
    double delta = 0.0;
    std::vector<double> betas;
    double h = 0.05;
    int levels = 3;
    std::optional<double> tol;
    int max_iters = 50;
};

struct SweepArgs {
    int points = 10;
    int arc_segments = 1024;
};

struct EigArgs {
    std::string problem = "mixed";
    std::optional<std::size_t> vertex;
    std::optional<double> radius;
    std::optional<double> delta;
    double beta = 1e4;
    double h = 0.1;
    int levels = 4;
    bool dump = false;
};

struct OptimizeArgs {
    double delta = 0.0;
    double beta = 1e4;
    double h = 0.05;
    int levels = 2;
    std::string init = "sector";
    int max_iters = 50;
    double tol = 0.01;
};

std::string join(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ";" : "") + fmt(v[i]);
    return s;
}

std::string opt_str(const std::optional<double>& v) { return v ? fmt(*v) : std::string("auto"); }

// Fixed key set so every output records mesh size, levels, seed and tolerance.
Provenance provenance(const std::string& command, const Polygond& p, const Common& c, const std::string& h,
                      const std::string& levels, const std::string& tol)
{
    return {{"version", std::string(kVersion)}, {"command", command}, {"polygon_hash", hex64(polygon_hash(p))},
            {"h", h}, {"levels", levels}, {"seed", std::to_string(c.seed)}, {"tol", tol}};
}

fs::path prepare_out(const std::string& dir)
{
    fs::path out(dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec)
        throw ParameterError("cannot create output directory " + dir + ": " + ec.message());
    return out;
}

std::ofstream open_out(const fs::path& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ParameterError("cannot write " + path.string());
    return f;
}

std::vector<std::string> svg_header(const Provenance& prov)
{
    std::vector<std::string> lines;
    for (const auto& [k, v] : prov)
        lines.push_back(k + ": " + v);
    return lines;
}

void write_svg(const fs::path& path, SvgPlot plot, const Provenance& prov)
{
    plot.header = svg_header(prov);
    auto f = open_out(path);
    f << render_svg(plot);
}

std::vector<double> log_grid(double lo, double hi, int n)
{
    std::vector<double> g;
    for (int i = 0; i < n; ++i)
        g.push_back(std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * i / (n - 1)));
    return g;
}

int cmd_analyze(const Common& c, std::ostream& out)
{
    const Polygond p = read_polygon_json(c.polygon);
    const auto inv = polygon_invariants(p);
    std::string vmin;
    for (std::size_t i = 0; i < inv.v_min.size(); ++i)
        vmin += (i ? ";" : "") + std::to_string(inv.v_min[i]);
    char buf[256];
    std::snprintf(buf, sizeof buf, "alpha_min=%.6f, d=%.6f, delta_bar=%.6f, omega_area=%.6f, v_min=%s\n",
                  inv.alpha_min, inv.d, inv.delta_bar, inv.omega_area, vmin.c_str());
    out << buf;

    const fs::path dir = prepare_out(c.out);
    auto f = open_out(dir / "invariants.csv");
    CsvWriter csv(f, provenance("analyze", p, c, "none", "none", "none"), {"n", "alpha_min", "v_min", "d", "delta_bar", "omega_area"});
    csv.row({std::to_string(p.size()), fmt(inv.alpha_min), vmin, fmt(inv.d), fmt(inv.delta_bar), fmt(inv.omega_area)});
    return kExitOk;
}

int cmd_verify(const Common& c, const VerifyArgs& a, std::ostream& out, std::ostream& err)
{
    const Polygond p = read_polygon_json(c.polygon);
    if (a.levels < 3)
        throw ParameterError("--levels must be at least 3 for Richardson extrapolation");
    if (!(a.h > 0.0))
        throw ParameterError("--h must be positive");
    std::vector<double> betas;
    for (double beta : a.betas) {
        const Admissibility adm = admissibility(p, beta, a.delta);
        if (adm.ok())
            betas.push_back(beta);
        else
            err << "warning: skipping " << adm.reason << "\n";
    }
    if (betas.empty()) {
        err << "error: no admissible (beta, delta) combination to verify\n";
        return kExitNothingToRun;
    }

    RatioOptions opt;
    opt.h0 = a.h;
    opt.levels = a.levels;
    opt.max_iters = a.max_iters;
    opt.tol = a.tol;
    opt.jobs = c.jobs;
    const auto reports = ratio_report(p, betas, a.delta, opt);
    const bool approach = approaches_one(reports);

    Provenance prov = provenance("verify", p, c, fmt(a.h), std::to_string(a.levels), opt_str(a.tol));
    prov.insert(prov.end(), {{"delta", fmt(a.delta)}, {"beta", join(betas)}, {"max_iters", std::to_string(a.max_iters)}});
    const fs::path dir = prepare_out(c.out);
    {
        auto f = open_out(dir / "bounds.csv");
        CsvWriter csv(f, prov,
                      {"beta", "delta", "epsilon", "sd_delta", "sd_shifted", "sandwich_lower", "lambda_sphere",
                       "od_upper", "ratio_od_sd", "lower_envelope", "ratio_sphere_od", "upper_ratio_envelope",
                       "majorant_bound", "fem_tol", "slack_od_sd", "slack_sphere_od", "od_sd_ok", "sphere_od_ok",
                       "sandwich_ok", "majorant_ok"});
        for (const auto& r : reports)
            csv.row({fmt(r.beta), fmt(r.delta), fmt(r.epsilon), fmt(r.sd_delta), fmt(r.sd_shifted),
                     fmt(r.sandwich_lower), fmt(r.lambda_sphere), fmt(r.od_upper), fmt(r.ratio_od_sd),
                     fmt(r.lower_envelope), fmt(r.ratio_sphere_od), fmt(r.upper_ratio_envelope), fmt(r.majorant_bound),
                     fmt(r.fem_tol), fmt(r.slack_od_sd), fmt(r.slack_sphere_od), std::to_string(r.od_sd_ok),
                     std::to_string(r.sphere_od_ok), std::to_string(r.sandwich_ok), std::to_string(r.majorant_ok)});
    }
    {
        auto f = open_out(dir / "bounds_levels.csv");
        CsvWriter csv(f, prov, {"beta", "level", "h", "triangles", "lambda_sphere", "od_level", "od_measure",
                                "iterations", "warmup_steps", "stopped_on_increase"});
        for (const auto& r : reports)
            for (std::size_t k = 0; k < r.study.runs.size(); ++k) {
                const auto& run = r.study.runs[k];
                const auto& lvl = r.study.od.levels[k];
                csv.row({fmt(r.beta), std::to_string(k), fmt(lvl.h), std::to_string(lvl.triangles),
                         fmt(r.study.sphere.levels[k].value), fmt(lvl.value), fmt(lvl.in_d_area),
                         std::to_string(run.trace.size()), std::to_string(run.warmup_steps),
                         std::to_string(run.stopped_on_increase)});
            }
    }
    {
        SvgPlot plot;
        plot.title = "Envelope check, delta = " + fmt(a.delta);
        plot.xlabel = "beta";
        plot.ylabel = "ratio";
        plot.logx = plot.logy = true;
        const auto grid = log_grid(betas.front() * 0.9, betas.back() * 1.1, 60);
        std::vector<double> lo, hi, rb, ro, rs;
        for (double b : grid) {
            lo.push_back(lower_envelope(b));
            hi.push_back(upper_ratio_envelope(b));
        }
        for (const auto& r : reports) {
            rb.push_back(r.beta);
            ro.push_back(r.ratio_od_sd);
            rs.push_back(r.ratio_sphere_od);
        }
        plot.series.push_back({"OD upper / SD", rb, ro, "#1f77b4", true, true, false});
        plot.series.push_back({"lower envelope", grid, lo, "#1f77b4", true, false, true});
        plot.series.push_back({"lambda(sector) / OD upper", rb, rs, "#d62728", true, true, false});
        plot.series.push_back({"upper envelope", grid, hi, "#d62728", true, false, true});
        plot.series.push_back({"1", {grid.front(), grid.back()}, {1.0, 1.0}, "#777777", true, false, false});
        write_svg(dir / "envelope.svg", plot, prov);
    }

    std::size_t passed = 0;
    const BoundsReport* worst = &reports.front();
    for (const auto& r : reports) {
        passed += r.ok();
        if (std::min(r.slack_od_sd, r.slack_sphere_od) < std::min(worst->slack_od_sd, worst->slack_sphere_od))
            worst = &r;
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "verify: %zu/%zu beta values pass; worst slack %.4g at beta=%g; approach to 1: %s\n",
                  passed, reports.size(), std::min(worst->slack_od_sd, worst->slack_sphere_od), worst->beta,
                  approach ? "ok" : "FAILED");
    out << buf;
    return passed == reports.size() && approach ? kExitOk : kExitFailure;
}

int cmd_sweep(const Common& c, const SweepArgs& a, std::ostream& out)
{
    const Polygond p = read_polygon_json(c.polygon);
    if (a.points < 1)
        throw ParameterError("--points must be positive");
    const auto inv = polygon_invariants(p);
    std::vector<double> deltas;
    for (int k = 1; k <= a.points; ++k)
        deltas.push_back(inv.delta_bar * k / (a.points + 1));

    std::vector<IsoperimetricProfile> prof(deltas.size());
    parallel_for(deltas.size(), c.jobs, [&](std::size_t i) { prof[i] = isoperimetric_profile(p, deltas[i]); });

    Provenance prov = provenance("sweep", p, c, "none", "none", "1e-9 (family A), 1e-6 (families B, C)");
    prov.insert(prov.end(), {{"points", std::to_string(a.points)},
                             {"arc_segments", std::to_string(a.arc_segments)},
                             {"delta_bar", fmt(inv.delta_bar)}});
    const fs::path dir = prepare_out(c.out);
    {
        auto f = open_out(dir / "sweep.csv");
        CsvWriter csv(f, prov,
                      {"delta", "sd", "I", "K", "sector_ratio", "best_B", "best_C", "margin_B", "margin_C", "bound_B",
                       "bound_C"});
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            const auto& pr = prof[i];
            const auto best = [](const FamilySweep& s) { return s.empty() ? std::string("none") : fmt(s.best_candidate().ratio); };
            csv.row({fmt(deltas[i]), fmt(spectral_drop(p, deltas[i]).value), fmt(pr.I), fmt(pr.K),
                     fmt(sector_ratio(inv.alpha_min)), best(pr.same_edge), best(pr.cross_chord),
                     fmt(pr.margin_same_edge), fmt(pr.margin_cross_chord), fmt(pr.bound_same_edge),
                     fmt(pr.bound_cross_chord)});
        }
    }
    {
        const std::size_t mid = deltas.size() / 2;
        auto f = open_out(dir / "candidates.csv");
        write_provenance(f, prov);
        f << "# delta: " << fmt(deltas[mid]) << "\n";
        std::vector<FamilySweep> sweeps;
        for (Family fam : {Family::VertexSector, Family::SameEdge, Family::CrossChord})
            sweeps.push_back(best_in_family(p, deltas[mid], fam, 128, a.arc_segments));
        write_candidates_csv(f, sweeps);
    }
    {
        SvgPlot plot;
        plot.title = "Isoperimetric profile";
        plot.xlabel = "delta";
        plot.ylabel = "ratio";
        std::vector<double> I, B, C, flat;
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            I.push_back(prof[i].I);
            B.push_back(prof[i].same_edge.empty() ? NAN : prof[i].same_edge.best_candidate().ratio);
            C.push_back(prof[i].cross_chord.empty() ? NAN : prof[i].cross_chord.best_candidate().ratio);
            flat.push_back(sector_ratio(inv.alpha_min));
        }
        plot.series.push_back({"I (family A)", deltas, I, "#1f77b4", true, true, false});
        plot.series.push_back({"sqrt(alpha_min/2)", deltas, flat, "#777777", true, false, true});
        plot.series.push_back({"best B", deltas, B, "#2ca02c", true, true, false});
        plot.series.push_back({"best C", deltas, C, "#d62728", true, true, false});
        write_svg(dir / "profile.svg", plot, prov);

        SvgPlot sd;
        sd.title = "Spectral drop";
        sd.xlabel = "delta";
        sd.ylabel = "SD(delta)";
        sd.logx = sd.logy = true;
        std::vector<double> v;
        for (double d : deltas)
            v.push_back(spectral_drop(p, d).value);
        sd.series.push_back({"SD", deltas, v, "#1f77b4", true, true, false});
        write_svg(dir / "sd.svg", sd, prov);
    }
    char buf[160];
    double spread = 0.0;
    for (const auto& pr : prof)
        spread = std::max(spread, std::abs(pr.I - sector_ratio(inv.alpha_min)));
    std::snprintf(buf, sizeof buf, "sweep: %zu values of delta in (0, %.6f); I = %.6f (max deviation %.2e)\n",
                  deltas.size(), inv.delta_bar, sector_ratio(inv.alpha_min), spread);
    out << buf;
    return kExitOk;
}

int cmd_eig(const Common& c, const EigArgs& a, std::ostream& out)
{
    const Polygond p = read_polygon_json(c.polygon);
    const auto inv = polygon_invariants(p);
    const std::size_t vertex = a.vertex.value_or(inv.v_min.front());
    if (vertex >= p.size())
        throw ParameterError("--vertex out of range");
    if (a.radius.has_value() == a.delta.has_value())
        throw ParameterError("give exactly one of --radius or --delta for the vertex sector");
    const RegionSpec spec =
        a.radius ? make_vertex_sector_radius(p, vertex, *a.radius) : make_vertex_sector(p, vertex, *a.delta);
    const double radius = std::get<VertexSector>(spec.kind).radius;

    Problem problem;
    if (a.problem == "mixed") {
        problem.kind = ProblemKind::Mixed;
    } else if (a.problem == "weighted") {
        problem.kind = ProblemKind::Weighted;
        problem.beta = a.beta;
    } else {
        throw ParameterError("--problem must be mixed or weighted");
    }
    const RefineStudy st = refine_study(p, spec, problem, a.levels, a.h);

    Provenance prov = provenance("eig", p, c, fmt(a.h), std::to_string(a.levels), "none");
    prov.insert(prov.end(), {{"problem", a.problem},
                             {"vertex", std::to_string(vertex)},
                             {"radius", fmt(radius)},
                             {"delta", fmt(spec.target_measure)},
                             {"beta", problem.kind == ProblemKind::Weighted ? fmt(a.beta) : std::string("none")}});
    const fs::path dir = prepare_out(c.out);
    {
        auto f = open_out(dir / "eig.csv");
        CsvWriter csv(f, prov, {"level", "h", "triangles", "in_d_area", "value"});
        for (std::size_t k = 0; k < st.levels.size(); ++k)
            csv.row({std::to_string(k), fmt(st.levels[k].h), std::to_string(st.levels[k].triangles),
                     fmt(st.levels[k].in_d_area), fmt(st.levels[k].value)});
    }
    const double reference = kDirichletDisk / (radius * radius);
    {
        auto f = open_out(dir / "eig_summary.csv");
        CsvWriter csv(f, prov, {"extrapolated", "order", "error_estimate", "monotone", "sector_reference"});
        csv.row({fmt(st.extrapolated), fmt(st.order), fmt(st.error_estimate), std::to_string(st.monotone),
                 fmt(reference)});
    }
    if (a.dump) {
        Mesh m = triangulate(p, spec, a.h);
        const AssembledSystem sys = assemble(m);
        auto fm = open_out(dir / "mesh.txt");
        write_mesh(fm, m);
        auto fk = open_out(dir / "stiffness.txt");
        write_triplets(fk, sys.stiffness);
        auto fd = open_out(dir / "mass_d.txt");
        write_triplets(fd, sys.mass_d);
        auto fc = open_out(dir / "mass_c.txt");
        write_triplets(fc, sys.mass_c);
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s eigenvalue: extrapolated=%.6f order=%.3f estimate=%.2e monotone=%s",
                  a.problem.c_str(), st.extrapolated, st.order, st.error_estimate, st.monotone ? "yes" : "no");
    out << buf;
    if (problem.kind == ProblemKind::Mixed) {
        std::snprintf(buf, sizeof buf, " (sector reference j01^2/r^2=%.6f)", reference);
        out << buf;
    }
    out << "\n";
    return kExitOk;
}

int cmd_optimize(const Common& c, const OptimizeArgs& a, std::ostream& out)
{
    const Polygond p = read_polygon_json(c.polygon);
    const auto inv = polygon_invariants(p);
    if (a.levels < 1)
        throw ParameterError("--levels must be positive");
    if (!(a.delta > 0.0) || !(a.delta < inv.omega_area))
        throw ParameterError("--delta must lie in (0, |Omega|)");
    const bool closed_form = a.delta < inv.delta_bar;

    Mesh m = closed_form ? triangulate(p, make_vertex_sector(p, inv.v_min.front(), a.delta), a.h)
                         : triangulate(p, std::nullopt, a.h);
    for (int k = 1; k < a.levels; ++k)
        m = refine(m);
    OdOptions opt;
    opt.max_iters = a.max_iters;
    std::vector<Region> init;
    if (a.init == "sector") {
        if (!closed_form)
            throw ParameterError("sector initialization needs delta < delta_bar; use --init random");
        init = m.region;
    } else if (a.init == "random") {
        init = random_indicator(m, a.delta, c.seed);
        opt.continuation = true;
    } else {
        throw ParameterError("--init must be sector or random");
    }
    const OdResult r = od_upper_estimate(m, a.beta, a.delta, init, opt);

    Provenance prov = provenance("optimize", p, c, fmt(a.h), std::to_string(a.levels), fmt(a.tol));
    prov.insert(prov.end(), {{"delta", fmt(a.delta)},
                             {"beta", fmt(a.beta)},
                             {"init", a.init},
                             {"max_iters", std::to_string(a.max_iters)}});
    const fs::path dir = prepare_out(c.out);
    {
        auto f = open_out(dir / "trace.csv");
        CsvWriter csv(f, prov, {"iteration", "lambda", "measure"});
        for (std::size_t k = 0; k < r.trace.size(); ++k)
            csv.row({std::to_string(k), fmt(r.trace[k]), fmt(r.measure[k])});
    }
    {
        auto f = open_out(dir / "optimized_mesh.txt");
        write_mesh(f, with_indicator(m, r.region));
    }
    {
        SvgPlot plot;
        plot.title = "Alternating scheme, beta = " + fmt(a.beta);
        plot.xlabel = "iteration";
        plot.ylabel = "lambda";
        std::vector<double> it;
        for (std::size_t k = 0; k < r.trace.size(); ++k)
            it.push_back(double(k));
        plot.series.push_back({"lambda", it, r.trace, "#1f77b4", true, true, false});
        if (closed_form) {
            const double sd = spectral_drop(p, a.delta).value;
            plot.series.push_back({"SD(delta)", {0.0, std::max(1.0, double(r.trace.size() - 1))}, {sd, sd}, "#777777",
                                   true, false, true});
        }
        write_svg(dir / "trace.svg", plot, prov);
    }

    char buf[256];
    std::snprintf(buf, sizeof buf, "optimize: OD upper estimate %.6f after %zu iterations (best at %zu)%s", r.value,
                  r.trace.size(), r.best_iter, r.stopped_on_increase ? ", stopped on increase" : "");
    out << buf;
    int code = kExitOk;
    if (closed_form) {
        const double sd = spectral_drop(p, a.delta).value;
        const bool ok = r.value <= sd * (1.0 + a.tol);
        std::snprintf(buf, sizeof buf, "; SD(delta)=%.6f, ratio=%.6f %s", sd, r.value / sd,
                      ok ? "<= 1+tol" : "EXCEEDS 1+tol");
        out << buf;
        code = ok ? kExitOk : kExitFailure;
    }
    out << "\n";
    return code;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"sdlab: spectral drop and optimal design eigenvalues on convex polygons"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.set_help_flag("--help", "print this help and exit");

    Common common;
    VerifyArgs verify;
    SweepArgs sweep;
    EigArgs eig;
    OptimizeArgs optimize;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--polygon", common.polygon, "polygon JSON file {\"vertices\": [[x,y],...]}")->required();
        sub->add_option("--out", common.out, "output directory")->capture_default_str();
        sub->add_option("--jobs", common.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--seed", common.seed, "seed (random optimizer start), recorded in every output")
            ->capture_default_str();
    };

    auto* analyze_cmd = app.add_subcommand("analyze", "polygon invariants");
    add_common(analyze_cmd);

    auto* verify_cmd = app.add_subcommand("verify", "check the large-beta envelopes on a beta grid");
    add_common(verify_cmd);
    verify_cmd->add_option("--delta", verify.delta, "measure of D")->required();
    verify_cmd->add_option("--beta", verify.betas, "comma-separated beta grid")->required()->delimiter(',');
    verify_cmd->add_option("--h", verify.h, "coarsest mesh size")->capture_default_str();
    verify_cmd->add_option("--levels", verify.levels, "mesh levels")->capture_default_str();
    verify_cmd->add_option("--tol", verify.tol, "FEM tolerance (default: Richardson estimate, at least 1e-3)");
    verify_cmd->add_option("--max-iters", verify.max_iters, "optimizer iterations")->capture_default_str();

    auto* sweep_cmd = app.add_subcommand("sweep", "SD and the isoperimetric profile over a delta grid");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--points", sweep.points, "grid points in (0, delta_bar)")->capture_default_str();
    sweep_cmd->add_option("--arc-segments", sweep.arc_segments, "arc segments for candidate regions")
        ->capture_default_str();

    auto* eig_cmd = app.add_subcommand("eig", "refinement study of one eigenproblem on a vertex sector");
    add_common(eig_cmd);
    eig_cmd->add_option("--problem", eig.problem, "mixed or weighted")->capture_default_str();
    eig_cmd->add_option("--vertex", eig.vertex, "sector vertex (default: a smallest-angle vertex)");
    eig_cmd->add_option("--radius", eig.radius, "sector radius");
    eig_cmd->add_option("--delta", eig.delta, "sector measure");
    eig_cmd->add_option("--beta", eig.beta, "beta for the weighted problem")->capture_default_str();
    eig_cmd->add_option("--h", eig.h, "coarsest mesh size")->capture_default_str();
    eig_cmd->add_option("--levels", eig.levels, "mesh levels")->capture_default_str();
    eig_cmd->add_flag("--dump", eig.dump, "write the coarse mesh and matrices as text");

    auto* opt_cmd = app.add_subcommand("optimize", "alternating upper estimate of OD(beta, delta)");
    add_common(opt_cmd);
    opt_cmd->add_option("--delta", optimize.delta, "measure of D")->required();
    opt_cmd->add_option("--beta", optimize.beta, "beta")->capture_default_str();
    opt_cmd->add_option("--h", optimize.h, "mesh size")->capture_default_str();
    opt_cmd->add_option("--levels", optimize.levels, "mesh levels (finest is used)")->capture_default_str();
    opt_cmd->add_option("--init", optimize.init, "sector or random")->capture_default_str();
    opt_cmd->add_option("--max-iters", optimize.max_iters, "iterations")->capture_default_str();
    opt_cmd->add_option("--tol", optimize.tol, "tolerance of the comparison with SD")->capture_default_str();

    std::vector<const char*> argv{"sdlab"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (analyze_cmd->parsed())
            return cmd_analyze(common, out);
        if (verify_cmd->parsed())
            return cmd_verify(common, verify, out, err);
        if (sweep_cmd->parsed())
            return cmd_sweep(common, sweep, out);
        if (eig_cmd->parsed())
            return cmd_eig(common, eig, out);
        if (opt_cmd->parsed())
            return cmd_optimize(common, optimize, out);
    } catch (const ValidationError& e) {
        err << "invalid polygon: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const RegimeError& e) {
        err << "error: " << e.what() << " (largest admissible delta " << fmt(e.max_delta()) << ")\n";
        return kExitBadInput;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const GeometryError& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const MeshError& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}

} // namespace sdlab
