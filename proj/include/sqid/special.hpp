#pragma once

#include <cmath>
#include <limits>

// Special functions needed by the probability kernels: regularized
// incomplete beta and gamma functions, each with a log-domain variant
// so tail values far below DBL_MIN stay usable.

namespace sqid {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();
inline constexpr double pos_inf = std::numeric_limits<double>::infinity();

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double beta_inc(double a, double b, double x);

/// log of I_x(a, b); accurate even when the value underflows double.
double log_beta_inc(double a, double b, double x);

/// Same with the complement xc = 1 - x passed explicitly, so callers
/// that know both to full precision (e.g. sin^2 / cos^2) avoid the
/// cancellation in computing 1 - x.
double log_beta_inc_xc(double a, double b, double x, double xc);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

/// log P(a, x), tail-accurate for x << a.
double log_gamma_p(double a, double x);

/// log Q(a, x), tail-accurate for x >> a.
double log_gamma_q(double a, double x);

/// log(exp(la) + exp(lb)) without overflow; handles -inf.
inline double log_add_exp(double la, double lb) {
    if (la == neg_inf) return lb;
    if (lb == neg_inf) return la;
    double hi = la > lb ? la : lb;
    double lo = la > lb ? lb : la;
    return hi + std::log1p(std::exp(lo - hi));
}

/// log(exp(la) - exp(lb)) for la >= lb; returns -inf when equal.
inline double log_sub_exp(double la, double lb) {
    if (lb == neg_inf) return la;
    if (la <= lb) return neg_inf;
    return la + std::log1p(-std::exp(lb - la));
}

}  // namespace sqid
