#include "sdlab/fem.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <thread>

namespace sdlab {

namespace {

struct ElementMatrices {
    Eigen::Matrix3d stiffness;
    double area;
};

ElementMatrices element(const Mesh& m, std::size_t t)
{
    const auto& tri = m.triangles[t];
    const Point2d& p0 = m.nodes[tri[0]];
    const Point2d& p1 = m.nodes[tri[1]];
    const Point2d& p2 = m.nodes[tri[2]];
    ElementMatrices e;
    e.area = 0.5 * orient<double>(p0, p1, p2);
    if (!(e.area > 1e-14 * m.omega_area))
        throw MeshError("degenerate triangle " + std::to_string(t) + " (area " + std::to_string(e.area) + ")");
    // Edge opposite node i; grad(phi_i) is its rotation by 90 degrees over 2 area.
    const Point2d edges[3] = {p2 - p1, p0 - p2, p1 - p0};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            e.stiffness(i, j) = edges[i].dot(edges[j]) / (4.0 * e.area);
    return e;
}

SparseMatrix from_triplets(int n, const std::vector<Eigen::Triplet<double>>& t)
{
    SparseMatrix a(n, n);
    a.setFromTriplets(t.begin(), t.end());
    return a;
}

SparseMatrix restrict_to(const SparseMatrix& a, const std::vector<int>& map, int n)
{
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(a.nonZeros());
    for (int col = 0; col < a.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(a, col); it; ++it)
            if (map[it.row()] >= 0 && map[it.col()] >= 0)
                t.emplace_back(map[it.row()], map[it.col()], it.value());
    return from_triplets(n, t);
}

// Decides positive definiteness of K - t B by attempting a Cholesky factorization.
class ShiftedPencil {
public:
    ShiftedPencil(const SparseMatrix& K, const SparseMatrix& B) : K_(K), B_(B)
    {
        llt_.analyzePattern(SparseMatrix(K_ - B_));
    }

    bool definite(double t)
    {
        ++factorizations;
        llt_.factorize(SparseMatrix(K_ - t * B_));
        return llt_.info() == Eigen::Success;
    }

    Eigen::VectorXd solve(const Eigen::VectorXd& b) const { return llt_.solve(b); }

    int factorizations = 0;

private:
    const SparseMatrix& K_;
    const SparseMatrix& B_;
    Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt_;
};

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};

constexpr double kBracketWidth = 1e-3;

// Smallest t > 0 where K - t B stops being positive definite, within kBracketWidth.
Bracket bracket_root(ShiftedPencil& pencil, double hi, const std::optional<std::pair<double, double>>& hint)
{
    Bracket b{0.0, hi};
    if (hint && hint->first > 0.0 && hint->second > hint->first) {
        if (pencil.definite(hint->first))
            b.lo = hint->first;
        b.hi = hint->second;
    }
    for (int grow = 0; pencil.definite(b.hi); ++grow) {
        if (grow == 60)
            throw SolverError("no loss of definiteness below " + std::to_string(b.hi) +
                              "; the pencil has no positive eigenvalue with positive denominator in range");
        b.lo = b.hi;
        b.hi *= 2.0;
    }
    for (int it = 0; !(b.lo > 0.0) || b.hi - b.lo > kBracketWidth * b.hi; ++it) {
        if (it == 200)
            throw SolverError("bisection did not isolate the principal eigenvalue");
        const double mid = 0.5 * (b.lo + b.hi);
        (pencil.definite(mid) ? b.lo : b.hi) = mid;
    }
    return b;
}

struct PencilSolution {
    Eigen::VectorXd x;
    double value;
    double residual;
    double denom;
    int iterations;
    Bracket bracket;
};

// Inverse iteration for K x = t B x shifted at the lower bracket end, where the
// principal eigenvalue is by far the closest one.
PencilSolution pencil_solve(const SparseMatrix& K, const SparseMatrix& B, double hi,
                            const std::optional<std::pair<double, double>>& hint, Eigen::VectorXd x)
{
    ShiftedPencil pencil(K, B);
    const Bracket br = bracket_root(pencil, hi, hint);
    if (!pencil.definite(br.lo))
        throw SolverError("factorization at the lower bracket end failed");

    x.normalize();
    double value = rayleigh_quotient(K, B, x);
    int steps = 0;
    int settled = 0;
    for (; steps < 500 && settled < 2; ++steps) {
        Eigen::VectorXd y = pencil.solve(B * x);
        const double norm = y.norm();
        if (!std::isfinite(norm) || norm == 0.0)
            throw SolverError("inverse iteration broke down");
        x = y / norm;
        const double next = rayleigh_quotient(K, B, x);
        settled = std::abs(next - value) <= 1e-15 * std::abs(next) ? settled + 1 : 0;
        value = next;
    }
    Eigen::Index arg = 0;
    x.cwiseAbs().maxCoeff(&arg);
    if (x[arg] < 0.0)
        x = -x;

    PencilSolution s;
    s.value = rayleigh_quotient(K, B, x);
    s.denom = x.dot(B * x);
    s.residual = (K * x - s.value * (B * x)).norm() / x.norm();
    s.iterations = pencil.factorizations + steps;
    s.bracket = br;
    s.x = std::move(x);

    const double slack = 1e-9 * br.hi;
    if (!(s.denom > 0.0))
        throw SolverError("eigenvector has non-positive denominator");
    if (!(s.value >= br.lo - slack && s.value <= br.hi + slack))
        throw SolverError("inverse iteration converged to " + std::to_string(s.value) + " outside the bracket [" +
                          std::to_string(br.lo) + ", " + std::to_string(br.hi) + "]");
    if (!(s.residual <= 1e-8 * stiffness_scale(K)))
        throw SolverError("eigen residual " + std::to_string(s.residual) + " above certificate bound");
    return s;
}

SparseMatrix weight_matrix(const AssembledSystem& sys, double beta)
{
    return SparseMatrix(sys.mass_d - beta * sys.mass_c);
}

void check_weighted(const AssembledSystem& sys, double beta)
{
    if (!(sys.measure_d > 0.0) || !(sys.measure_c > 0.0))
        throw ParameterError("the weighted problem needs both D and its complement to be nonempty");
    const double floor = beta_admissibility_floor(sys);
    if (!(beta > floor))
        throw ParameterError("beta = " + std::to_string(beta) + " is not admissible; need beta > |D|/|Omega\\D| = " +
                             std::to_string(floor));
}

} // namespace

AssembledSystem assemble(const Mesh& m, int jobs)
{
    const std::size_t nt = m.triangles.size();
    if (m.region.size() != nt)
        throw MeshError("region tags do not match the triangle count");
    std::vector<ElementMatrices> elems(nt);
    jobs = std::max(1, std::min<int>(jobs, int(nt / 4096) + 1));
    if (jobs == 1) {
        for (std::size_t t = 0; t < nt; ++t)
            elems[t] = element(m, t);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(jobs);
        for (int j = 0; j < jobs; ++j)
            pool.emplace_back([&, j] {
                try {
                    for (std::size_t t = nt * j / jobs; t < nt * (j + 1) / jobs; ++t)
                        elems[t] = element(m, t);
                } catch (...) {
                    errors[j] = std::current_exception();
                }
            });
        for (auto& th : pool)
            th.join();
        for (auto& e : errors)
            if (e)
                std::rethrow_exception(e);
    }

    std::vector<Eigen::Triplet<double>> k, md, mc;
    k.reserve(9 * nt);
    md.reserve(9 * nt);
    mc.reserve(9 * nt);
    AssembledSystem sys;
    for (std::size_t t = 0; t < nt; ++t) {
        const auto& tri = m.triangles[t];
        const auto& e = elems[t];
        const bool in_d = m.region[t] == Region::InD;
        (in_d ? sys.measure_d : sys.measure_c) += e.area;
        auto& mass = in_d ? md : mc;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                k.emplace_back(tri[i], tri[j], e.stiffness(i, j));
                mass.emplace_back(tri[i], tri[j], e.area * (i == j ? 1.0 / 6.0 : 1.0 / 12.0));
            }
    }
    const int n = int(m.nodes.size());
    sys.stiffness = from_triplets(n, k);
    sys.mass_d = from_triplets(n, md);
    sys.mass_c = from_triplets(n, mc);
    sys.mass_total = sys.mass_d + sys.mass_c;
    sys.h = m.h;

    std::vector<char> touches_c(n, 0);
    for (std::size_t t = 0; t < nt; ++t)
        if (m.region[t] == Region::OutD)
            for (int v : m.triangles[t])
                touches_c[v] = 1;
    sys.dof_map.assign(n, -1);
    for (int v = 0; v < n; ++v)
        if (!touches_c[v])
            sys.dof_map[v] = sys.num_free++;
    return sys;
}

double rayleigh_quotient(const SparseMatrix& K, const SparseMatrix& B, const Eigen::VectorXd& u)
{
    return u.dot(K * u) / u.dot(B * u);
}

double stiffness_scale(const SparseMatrix& K)
{
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(K.rows());
    for (int col = 0; col < K.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(K, col); it; ++it)
            rows[it.row()] += std::abs(it.value());
    return rows.size() ? rows.maxCoeff() : 0.0;
}

double beta_admissibility_floor(const AssembledSystem& sys)
{
    return sys.measure_d / sys.measure_c;
}

EigenResult solve_mixed(const AssembledSystem& sys, const Mesh& m)
{
    if (!(sys.measure_d > 0.0))
        throw ParameterError("the mixed problem needs a nonempty region D");
    if (!(sys.measure_c > 0.0))
        throw ParameterError("D covers Omega: no Dirichlet part, the mixed eigenvalue is 0");
    if (sys.num_free == 0)
        throw ParameterError("region too small: no mesh node lies only in D; refine the mesh");
    const int n = sys.num_free;
    const SparseMatrix K = restrict_to(sys.stiffness, sys.dof_map, n);
    const SparseMatrix M = restrict_to(sys.mass_total, sys.dof_map, n);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const double hi = rayleigh_quotient(K, M, ones) * (1.0 + kBracketWidth);
    const PencilSolution s = pencil_solve(K, M, hi, std::nullopt, ones);

    EigenResult r;
    r.value = s.value;
    r.vector = Eigen::VectorXd::Zero(sys.size());
    for (int v = 0; v < sys.size(); ++v)
        if (sys.dof_map[v] >= 0)
            r.vector[v] = s.x[sys.dof_map[v]];
    r.residual = s.residual;
    r.denom = s.denom;
    r.mesh_h = m.h;
    r.iterations = s.iterations;
    r.bracket_lo = s.bracket.lo;
    r.bracket_hi = s.bracket.hi;
    return r;
}

EigenResult solve_weighted(const AssembledSystem& sys, double beta, const WeightedOptions& options)
{
    check_weighted(sys, beta);
    const SparseMatrix B = weight_matrix(sys, beta);
    const SparseMatrix& K = sys.stiffness;

    // Test function: the nodal indicator of D, preferring nodes away from the complement.
    Eigen::VectorXd start = Eigen::VectorXd::Zero(sys.size());
    for (int v = 0; v < sys.size(); ++v)
        if (sys.dof_map[v] >= 0)
            start[v] = 1.0;
    if (sys.num_free == 0) {
        for (int col = 0; col < sys.mass_d.outerSize(); ++col)
            for (SparseMatrix::InnerIterator it(sys.mass_d, col); it; ++it)
                start[it.row()] = 1.0;
    }
    double hi = 1.0;
    if (options.ceiling)
        hi = *options.ceiling;
    else if (start.dot(B * start) > 0.0)
        hi = rayleigh_quotient(K, B, start) * (1.0 + kBracketWidth);

    try {
        const PencilSolution s = pencil_solve(K, B, hi, options.hint, start);
        EigenResult r;
        r.value = s.value;
        r.vector = s.x;
        r.residual = s.residual;
        r.denom = s.denom;
        r.mesh_h = sys.h;
        r.iterations = s.iterations;
        r.bracket_lo = s.bracket.lo;
        r.bracket_hi = s.bracket.hi;
        return r;
    } catch (const SolverError&) {
        if (!options.allow_dense_fallback || sys.size() > 600)
            throw;
        return solve_weighted_dense(sys, beta);
    }
}

EigenResult solve_weighted_dense(const AssembledSystem& sys, double beta)
{
    check_weighted(sys, beta);
    const Eigen::MatrixXd K(sys.stiffness);
    const Eigen::MatrixXd B(weight_matrix(sys, beta));
    Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> qz(K, B, false);
    if (qz.info() != Eigen::Success)
        throw SolverError("dense QZ iteration failed");

    std::vector<double> candidates;
    for (Eigen::Index i = 0; i < K.rows(); ++i) {
        const std::complex<double> a = qz.alphas()[i];
        const double b = qz.betas()[i];
        if (b == 0.0 || std::abs(a.imag()) > 1e-8 * std::abs(a))
            continue;
        const double lambda = a.real() / b;
        if (std::isfinite(lambda) && lambda > 0.0)
            candidates.push_back(lambda);
    }
    std::sort(candidates.begin(), candidates.end());

    const SparseMatrix Bs = weight_matrix(sys, beta);
    for (double lambda : candidates) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(K - lambda * B);
        Eigen::Index k = 0;
        eig.eigenvalues().cwiseAbs().minCoeff(&k);
        Eigen::VectorXd u = eig.eigenvectors().col(k);
        const double denom = u.dot(Bs * u);
        if (!(denom > 0.0))
            continue;
        Eigen::Index arg = 0;
        u.cwiseAbs().maxCoeff(&arg);
        if (u[arg] < 0.0)
            u = -u;
        EigenResult r;
        r.value = rayleigh_quotient(sys.stiffness, Bs, u);
        r.denom = denom;
        r.residual = (sys.stiffness * u - r.value * (Bs * u)).norm() / u.norm();
        r.vector = std::move(u);
        r.mesh_h = sys.h;
        r.dense = true;
        r.bracket_lo = r.bracket_hi = lambda;
        return r;
    }
    throw SolverError("dense pencil has no positive eigenvalue with positive denominator");
}

RefineStudy richardson(std::vector<RefineLevel> levels)
{
    RefineStudy st;
    st.levels = std::move(levels);
    const std::size_t n = st.levels.size();
    if (n < 2)
        throw ParameterError("extrapolation needs at least two levels");
    auto v = [&](std::size_t i) { return st.levels[i].value; };
    auto extrapolate = [&](std::size_t fine) { return v(fine) + (v(fine) - v(fine - 1)) / 3.0; };
    st.extrapolated = extrapolate(n - 1);
    st.order = std::numeric_limits<double>::quiet_NaN();
    if (n >= 3) {
        const double q = (v(n - 3) - v(n - 2)) / (v(n - 2) - v(n - 1));
        if (q > 0.0)
            st.order = std::log2(q);
        st.error_estimate = std::abs(st.extrapolated - extrapolate(n - 2));
    } else {
        st.error_estimate = std::abs(st.extrapolated - v(n - 1));
    }
    for (std::size_t i = 1; i < n; ++i)
        if (v(i) > v(i - 1) * (1.0 + 1e-10))
            st.monotone = false;
    return st;
}

RefineStudy refine_study(const Polygond& p, const RegionSpec& spec, const Problem& problem, int levels, double h0)
{
    if (levels < 3)
        throw ParameterError("refine_study needs at least 3 levels");
    Mesh m = triangulate(p, spec, h0);
    std::vector<RefineLevel> out;
    for (int level = 0; level < levels; ++level) {
        if (level > 0)
            m = refine(m);
        const AssembledSystem sys = assemble(m);
        double value = 0.0;
        if (problem.kind == ProblemKind::Mixed) {
            value = solve_mixed(sys, m).value;
        } else {
            WeightedOptions opt;
            if (!out.empty())
                opt.hint = std::pair{0.9 * out.back().value, 1.02 * out.back().value};
            value = solve_weighted(sys, problem.beta, opt).value;
        }
        out.push_back(RefineLevel{m.h, m.num_triangles(), value, m.in_d_area()});
    }
    return richardson(std::move(out));
}

void write_triplets(std::ostream& os, const SparseMatrix& a)
{
    char buf[96];
    for (int col = 0; col < a.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
            std::snprintf(buf, sizeof buf, "%lld %lld %.17g\n", (long long)it.row(), (long long)it.col(), it.value());
            os << buf;
        }
}

} // namespace sdlab
