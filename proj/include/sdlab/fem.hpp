#pragma once

#include "sdlab/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace sdlab {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// P1 matrices on a tagged mesh, indexed by node.
///
/// dof_map sends a node to its index in the mixed problem, or -1 when the node
/// touches an OutD triangle (u = 0 there).
struct AssembledSystem {
    SparseMatrix stiffness;
    SparseMatrix mass_d;
    SparseMatrix mass_c;
    SparseMatrix mass_total;
    std::vector<int> dof_map;
    int num_free = 0;
    double measure_d = 0.0;
    double measure_c = 0.0;
    double h = 0.0;

    int size() const { return int(stiffness.rows()); }
};

/// Element matrices are computed on `jobs` threads and summed in element order,
/// so the result does not depend on the thread count.
AssembledSystem assemble(const Mesh& m, int jobs = 1);

struct EigenResult {
    double value = 0.0;
    Eigen::VectorXd vector; // nodal values on the full mesh
    double residual = 0.0;  // ||K u - value B u|| / ||u||
    double denom = 0.0;     // u^T B u
    double mesh_h = 0.0;
    int iterations = 0;     // factorizations plus inverse-iteration steps
    double bracket_lo = 0.0; // K - t B is positive definite at bracket_lo ...
    double bracket_hi = 0.0; // ... and not at bracket_hi
    bool dense = false;      // produced by the dense fallback
};

double rayleigh_quotient(const SparseMatrix& K, const SparseMatrix& B, const Eigen::VectorXd& u);

// Residual scale used in the certificate: ||K||_inf.
double stiffness_scale(const SparseMatrix& K);

/// Discrete mu(D, Omega): smallest eigenvalue of the stiffness restricted to free
/// nodes against the restricted total mass.
EigenResult solve_mixed(const AssembledSystem& sys, const Mesh& m);

struct WeightedOptions {
    std::optional<double> ceiling;                   // upper end of the search bracket
    std::optional<std::pair<double, double>> hint;   // warm bracket (lo, hi), verified before use
    bool allow_dense_fallback = true;                 // below 600 nodes, when the sparse certificate fails
};

/// Principal positive eigenvalue of K u = lambda (M_D - beta M_C) u with positive
/// denominator. Positive definiteness of K - t B holds exactly for t in
/// (0, lambda), which a Cholesky attempt decides; the bracket is bisected and the
/// eigenpair polished by inverse iteration at its lower end.
EigenResult solve_weighted(const AssembledSystem& sys, double beta, const WeightedOptions& options = {});

/// Reference solve through the dense QZ decomposition of (K, B): real positive
/// eigenvalues in increasing order, the first whose eigenvector has positive
/// denominator. O(n^3); meant for small meshes.
EigenResult solve_weighted_dense(const AssembledSystem& sys, double beta);

// beta > |D| / |Omega \ D|, required for the constant function to be excluded.
double beta_admissibility_floor(const AssembledSystem& sys);

enum class ProblemKind { Mixed, Weighted };

struct Problem {
    ProblemKind kind = ProblemKind::Mixed;
    double beta = 0.0;
};

struct RefineLevel {
    double h;
    std::size_t triangles;
    double value;
    double in_d_area;
};

struct RefineStudy {
    std::vector<RefineLevel> levels;
    double extrapolated = 0.0;   // order-2 Richardson value from the two finest levels
    double order = 0.0;          // observed order from the three finest levels
    double error_estimate = 0.0; // |R(L-1, L) - R(L-2, L-1)|
    bool monotone = true;        // values non-increasing under refinement
};

/// Richardson summary of a sequence computed on meshes with halving h.
RefineStudy richardson(std::vector<RefineLevel> levels);

/// Meshes spec at h0, then refines levels-1 times, solving on each mesh.
RefineStudy refine_study(const Polygond& p, const RegionSpec& spec, const Problem& problem, int levels, double h0);

// Coordinate format "row col value", 0-based, one entry per line.
void write_triplets(std::ostream& os, const SparseMatrix& a);

} // namespace sdlab
