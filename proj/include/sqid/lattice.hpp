#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "sqid/errors.hpp"

// Lattice representation with exact closest-point search (Schnorr-Euchner
// sphere decoding) and shell counting, either by enumeration or through
// the theta series of the built-in lattices.

namespace sqid {

/// Counts can exceed 64 bits for fine lattice scalings.
using BigCount = unsigned __int128;

std::string big_count_to_string(BigCount v);
double big_count_log2(BigCount v);

std::uint64_t default_point_budget();  // SQID_POINT_BUDGET or 10^8 nodes

struct LatticeSpec {
    enum class Kind { kLeech, kZn, kCustom };

    int dim = 0;
    Eigen::MatrixXd basis;  // columns are basis vectors (already scaled)
    double d_min = 0.0;
    double r_cov = 0.0;
    double scale = 1.0;  // cumulative factor relative to the base lattice
    Kind kind = Kind::kCustom;

    // cached decompositions for decoding
    Eigen::MatrixXd chol_r;     // upper triangular, basis^T basis = R^T R
    Eigen::MatrixXd basis_inv;

    /// The Leech lattice (24-dim, |det| = 1, d_min = 2, r_cov = sqrt(2)).
    static LatticeSpec leech();
    /// The integer lattice Z^m (d_min = 1, r_cov = sqrt(m)/2).
    static LatticeSpec zn(int m);
    /// Arbitrary basis with declared minimum distance and covering radius.
    static LatticeSpec custom(Eigen::MatrixXd basis, double d_min, double r_cov);
};

/// Scale basis, d_min and r_cov by s > 0.
LatticeSpec rescale(const LatticeSpec& lat, double s);

/// Plain-text loader: m, then m^2 decimals row-major, then d_min, r_cov.
LatticeSpec load_lattice_file(const std::string& path);

/// Exact nearest lattice point of y in integer coordinates; ties broken
/// by the lexicographically smallest coordinate vector.
Eigen::VectorXi nearest_point(const LatticeSpec& lat, const Eigen::VectorXd& y);

/// Number of lattice points with r_lo <= ||v|| <= r_hi (1e-9 tolerance
/// band on both boundaries). Uses the theta series for the built-in
/// lattices and budgeted sphere enumeration otherwise.
BigCount count_points_in_shell(const LatticeSpec& lat, double r_lo, double r_hi,
                               std::uint64_t node_budget = default_point_budget());

/// Same count, forced through sphere enumeration (used for cross-checks).
BigCount count_points_in_shell_enumerated(const LatticeSpec& lat, double r_lo,
                                          double r_hi,
                                          std::uint64_t node_budget = default_point_budget());

struct ShellPoint {
    Eigen::VectorXi coords;
    double sq_norm_key;  // exact integer for integral lattices
};

/// All lattice points in the shell, sorted by (squared norm, lexicographic
/// coordinates). Intended for small codes (flat indexing); budgeted.
std::vector<ShellPoint> list_shell_points(const LatticeSpec& lat, double r_lo,
                                          double r_hi,
                                          std::uint64_t node_budget = default_point_budget());

/// Sort key used by list_shell_points for a given coordinate vector.
double shell_point_key(const LatticeSpec& lat, const Eigen::VectorXi& coords);

}  // namespace sqid
