#pragma once

#include <Eigen/Dense>

#include "sqid/lattice.hpp"

// Wrapped spherical code: the unit sphere S^n is cut into latitude
// annuli, each annulus is mapped to a ball in R^{n-1}, quantized to a
// lattice, and mapped back. The covering angle of every codeword is
// bounded in closed form from the lattice covering radius, which is
// what makes the query rule admissible.

namespace sqid {

struct WrappedCode {
    int n = 0;            // ambient dimension
    LatticeSpec lattice;  // dimension n - 1
    int annuli = 0;       // N, always even; boundary latitudes pi*(i/N - 1/2)

    /// Boundary latitude alpha_i, i in [0, N].
    double alpha(int i) const;
    /// True if annulus i lies in the northern hemisphere (alpha_i >= 0).
    bool north(int i) const { return i >= annuli / 2; }
    /// Latitude of the boundary circle the mapping of annulus i is
    /// anchored at: alpha_i on the northern side, alpha_{i+1} on the
    /// southern side (the equator belongs to the northern branch).
    double anchor_latitude(int i) const;

    /// N from the lattice minimum distance: ceil(pi / sqrt(d)) rounded
    /// up to even, so one boundary sits at the equator.
    static WrappedCode make(int n, LatticeSpec lattice);
    /// Same with an explicit (even, >= 2) annulus count.
    static WrappedCode make_with_annuli(int n, LatticeSpec lattice, int annuli);
};

struct ShapeCodeword {
    int annulus = 0;
    Eigen::VectorXi coords;   // all-zero means the pole codeword
    Eigen::VectorXd s_hat;    // unit reconstruction
    bool pole() const { return coords.isZero(); }
};

struct CoveringBound {
    double angle = 0.0;      // radians, clamped to [0, pi]
    bool degenerate = false; // an arcsine argument exceeded 1 (coarse lattice)
};

/// Index i with alpha_i <= arcsin(s_n) < alpha_{i+1}; s_n = 1 maps to N-1.
int annulus_index(const WrappedCode& code, const Eigen::VectorXd& s);

/// Closest point to s on the anchor boundary circle of annulus i.
Eigen::VectorXd boundary_projection(const WrappedCode& code, const Eigen::VectorXd& s,
                                    int i);

/// h_i(s): radial point in R^{n-1} at distance cos(alpha) - 2 sin(|lat - alpha|/2);
/// returns the zero vector inside the polar caps.
Eigen::VectorXd map_to_plane(const WrappedCode& code, const Eigen::VectorXd& s);

/// Inverse of the mapping for annulus i; requires ||y|| in (0, 1].
/// Negative arcsine arguments land in the extended annulus.
Eigen::VectorXd inverse_map(const WrappedCode& code, const Eigen::VectorXd& y, int i,
                            bool north_hemisphere);

/// Reconstruction for a stored (annulus, coords) pair; coords == 0 is
/// the pole codeword of the annulus hemisphere.
ShapeCodeword reconstruct_codeword(const WrappedCode& code, int annulus,
                                   const Eigen::VectorXi& coords);

/// Full quantization pipeline: annulus, mapping, nearest lattice point,
/// back-projection (rescaled into the unit ball when needed).
ShapeCodeword quantize_shape(const WrappedCode& code, const Eigen::VectorXd& s);

/// Upper bound on the angle between any vector quantized to cw and the
/// reconstruction; depends only on (s_hat, annulus, r_cov).
CoveringBound covering_angle_bound(const WrappedCode& code, const ShapeCodeword& cw);

/// Shell of lattice norms reachable by codewords of annulus i.
struct AnnulusShell {
    double r_lo = 0.0;
    double r_hi = 0.0;
};
AnnulusShell annulus_shell(const WrappedCode& code, int i);

struct ShapeRate {
    BigCount codepoints = 0;  // M
    double bits_per_dim = 0.0;  // (1/n) log2 M
};

/// Total codepoint count across annuli and the resulting shape rate.
ShapeRate shape_rate(const WrappedCode& code);

/// Finest lattice scale whose shape rate does not exceed the target
/// (rate is a step function of scale; bisection to 1e-6 resolution).
double scale_for_rate(int n, const LatticeSpec& base_lattice, double target_bits_per_dim);

}  // namespace sqid
