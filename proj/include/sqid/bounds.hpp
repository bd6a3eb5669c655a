#pragma once

#include <vector>

#include "sqid/gain.hpp"

// Numerical evaluators for the analytic quantities: expansion
// probabilities of thin and thick caps, the achievability and
// genie-aided bounds, the sphere-covering rate relation, the converse,
// and the asymptotic identification rate / exponent. Each bound has a
// log2 form so values far below DBL_MIN remain comparable.

namespace sqid {

/// P{Y in the D-expansion of CAP_r(s, theta)} for Gaussian Y.
double prob_thin_cap_expansion(double r, double theta, int n, double D);
double log2_prob_thin_cap_expansion(double r, double theta, int n, double D);

/// Thick-cap version over the shell [r1, r2]; r1 = 0 degenerates to a
/// cone sector and r1 = r2 to the thin cap.
double prob_thick_cap_expansion(double r1, double r2, double theta, int n, double D);
double log2_prob_thick_cap_expansion(double r1, double r2, double theta, int n,
                                     double D);

/// Upper bound on P(maybe) for the shape-gain scheme with gain codebook
/// cells and a shape code of guaranteed covering angle theta.
double achievability_bound(int n, double D, const GainCodebook& gain_cb, double theta);
double log2_achievability_bound(int n, double D, const GainCodebook& gain_cb,
                                double theta);

/// Genie-aided variant: the decoder knows the exact gain.
double genie_bound(int n, double D, double theta);
double log2_genie_bound(int n, double D, double theta);

/// Covering angle guaranteed at shape rate R_S by the sphere-covering
/// density bound (valid for n >= 4).
double dumer_theta_for_rate(int n, double rate_shape);

/// Sphere-covering density bound value for S^n.
double dumer_density(int n);

/// Lower bound on P(maybe) for any rate-R scheme (grid over the two
/// free parameters, then golden-section refinement).
struct ConverseResult {
    double value = 0.0;
    double log2_value = 0.0;
    double c = 0.0;
    double eta = 0.0;
    bool feasible = false;
};
ConverseResult converse_bound(int n, double R, double D);

/// Identification rate log2(2 / (2 - D)); +inf for D >= 2.
double id_rate(double D);

/// Identification exponent at rate R (bits per dimension).
double id_exponent(double R, double D);

/// Best gain/shape rate allocation over a grid of gain level counts.
struct RateSplit {
    int gain_levels = 1;
    double rate_gain = 0.0;
    double rate_shape = 0.0;
    double theta = 0.0;
    double log2_bound = 0.0;
};
RateSplit best_rate_split(int n, double R, double D, const std::vector<int>& level_grid);

}  // namespace sqid
