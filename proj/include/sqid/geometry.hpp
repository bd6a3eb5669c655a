#pragma once

#include <Eigen/Dense>

// Sphere and cap geometry on R^n plus the chi amplitude distribution of
// a standard Gaussian vector. Everything here is a pure function of its
// arguments and safe to call concurrently.

namespace sqid {

/// A quantization cell superset: the cone of half-angle `half_angle`
/// around `center`, intersected with the shell r_inner <= ||x|| <= r_outer.
/// r_outer may be +inf (the last gain cell).
struct ThickCap {
    Eigen::VectorXd center;  // unit vector
    double half_angle = 0.0;
    double r_inner = 0.0;
    double r_outer = 0.0;

    ThickCap() = default;
    /// Validates the invariants (unit center, ordered radii).
    ThickCap(Eigen::VectorXd c, double theta, double r1, double r2);
};

/// Angle in [0, pi] between two nonzero vectors.
double angle_between(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2);

/// Fraction of the sphere surface covered by a cap of half-angle theta:
/// Omega(theta, n) = 1/2 I_{sin^2 theta}((n-1)/2, 1/2) for theta <= pi/2,
/// extended by the hemisphere complement for theta > pi/2.
double cap_fraction(double theta, int n);

/// log Omega(theta, n); exact in the far tail where Omega underflows.
double log_cap_fraction(double theta, int n);

/// Inverse of cap_fraction in theta, by bisection (|error| < 1e-12).
double cap_fraction_inverse(double p, int n);

/// Inverse taking log(p) directly, for probabilities below DBL_MIN.
double cap_fraction_inverse_log(double log_p, int n);

/// chi density of ||X||, X ~ N(0, I_n).
double chi_pdf(double r, int n);
double log_chi_pdf(double r, int n);

/// P{||X|| <= r} and the upper tail, via the incomplete gamma.
double chi_cdf(double r, int n);
double chi_sf(double r, int n);

/// P{r1 <= ||X|| <= r2}; log variant is tail-accurate on either side.
double chi_mass(int n, double r1, double r2);
double log_chi_mass(int n, double r1, double r2);

/// Quantile of the chi distribution (bisection).
double chi_quantile(int n, double p);

/// Radius beyond which the chi upper tail mass is below eps.
double chi_tail_radius(int n, double eps);

/// Euclidean distance from a point at radius r_y and angle phi off the
/// cap axis to the nearest point of the cap. phi must be
/// angle_between(y, cap.center). Reduces to 2-D by rotational symmetry.
double min_dist_to_thick_cap(double r_y, double phi, const ThickCap& cap);

/// Whether y lies in the D-expansion of the cap, i.e. within Euclidean
/// distance sqrt(n D) of it.
bool expansion_contains(const Eigen::VectorXd& y, const ThickCap& cap, double D, int n);

}  // namespace sqid
