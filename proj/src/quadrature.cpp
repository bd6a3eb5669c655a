#include "sqid/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sqid/special.hpp"

namespace sqid {

namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (symmetric half).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct SegEstimate {
    double log_k15;   // Kronrod estimate (log)
    double log_g7;    // embedded Gauss estimate (log)
};

SegEstimate eval_segment(const LogFn& log_f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double log_h = std::log(h);

    double lk = neg_inf;
    double lg = neg_inf;
    for (int j = 0; j < 8; ++j) {
        double v1 = log_f(c - h * kXgk[j]);
        double v2 = (j == 7) ? neg_inf : log_f(c + h * kXgk[j]);
        double pair = log_add_exp(v1, v2);
        lk = log_add_exp(lk, pair + std::log(kWgk[j]));
        if (j % 2 == 1) {
            lg = log_add_exp(lg, pair + std::log(kWg[j / 2]));
        }
    }
    return {lk + log_h, lg + log_h};
}

struct Segment {
    double a, b;
    int depth;
};

}  // namespace

double log_integrate(const LogFn& log_f, double a, double b, const QuadOptions& opt) {
    if (!(b >= a)) throw std::domain_error("log_integrate: b < a");
    if (a == b) return neg_inf;

    std::vector<Segment> stack{{a, b, 0}};
    std::vector<double> accepted;
    double running_total = neg_inf;
    const double log_abs = opt.abs_tol > 0 ? std::log(opt.abs_tol) : neg_inf;

    while (!stack.empty()) {
        Segment s = stack.back();
        stack.pop_back();
        SegEstimate e = eval_segment(log_f, s.a, s.b);
        double rel_err = pos_inf;
        if (e.log_k15 == neg_inf && e.log_g7 == neg_inf) {
            rel_err = 0.0;
        } else if (e.log_k15 != neg_inf && e.log_g7 != neg_inf) {
            rel_err = std::fabs(std::expm1(e.log_g7 - e.log_k15));
        }
        const bool negligible =
            e.log_k15 < log_abs - 6.0 ||
            (running_total != neg_inf && e.log_k15 < running_total - 46.0);
        if (rel_err <= opt.rel_tol || negligible || s.depth >= opt.max_depth) {
            accepted.push_back(e.log_k15);
            running_total = log_add_exp(running_total, e.log_k15);
        } else {
            const double m = 0.5 * (s.a + s.b);
            stack.push_back({m, s.b, s.depth + 1});
            stack.push_back({s.a, m, s.depth + 1});
        }
    }
    // deterministic accumulation order
    std::sort(accepted.begin(), accepted.end());
    double total = neg_inf;
    for (double v : accepted) total = log_add_exp(total, v);
    return total;
}

double log_integrate_segmented(const LogFn& log_f, double a, double b,
                               std::vector<double> breakpoints, const QuadOptions& opt) {
    breakpoints.push_back(a);
    breakpoints.push_back(b);
    std::sort(breakpoints.begin(), breakpoints.end());
    double total = neg_inf;
    double prev = a;
    for (double x : breakpoints) {
        if (!(x > prev) || x < a || x > b) continue;
        total = log_add_exp(total, log_integrate(log_f, prev, x, opt));
        prev = x;
    }
    if (prev < b) total = log_add_exp(total, log_integrate(log_f, prev, b, opt));
    return total;
}

double integrate_pos(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opt) {
    auto log_f = [&f](double x) {
        double v = f(x);
        return v > 0.0 ? std::log(v) : neg_inf;
    };
    return std::exp(log_integrate(log_f, a, b, opt));
}

}  // namespace sqid
