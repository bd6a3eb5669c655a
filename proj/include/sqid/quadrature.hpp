#pragma once

#include <functional>
#include <vector>

// Adaptive Gauss-Kronrod (7-15) quadrature for nonnegative integrands,
// carried out in the log domain: the integrand is supplied as log f(x)
// and the result is log of the integral. This keeps quantities like
// chi tail masses at n = 500 meaningful where linear arithmetic
// underflows to zero.

namespace sqid {

struct QuadOptions {
    double rel_tol = 1e-10;   // per-segment relative tolerance
    double abs_tol = 1e-12;   // absolute tolerance (linear domain)
    int max_depth = 52;
};

using LogFn = std::function<double(double)>;

/// log of the integral of exp(log_f) over [a, b].
double log_integrate(const LogFn& log_f, double a, double b,
                     const QuadOptions& opt = {});

/// Same, with the interval pre-split at the given interior breakpoints
/// (unsorted and out-of-range values are tolerated).
double log_integrate_segmented(const LogFn& log_f, double a, double b,
                               std::vector<double> breakpoints,
                               const QuadOptions& opt = {});

/// Convenience linear-domain wrapper for a nonnegative integrand.
double integrate_pos(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opt = {});

}  // namespace sqid
