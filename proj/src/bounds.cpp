#include "sqid/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sqid/geometry.hpp"
#include "sqid/quadrature.hpp"
#include "sqid/special.hpp"

namespace sqid {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = 1.57079632679489661923;
constexpr double kLn2 = 0.69314718055994530942;

const QuadOptions kBoundQuad{1e-9, 1e-10, 52};

// radius below which the whole sphere S_{r_Y} sits inside the expanded
// cap; 0 when no such radius exists
double degenerate_radius(double r, double theta, double nd) {
    const double disc = nd - r * r * std::sin(theta) * std::sin(theta);
    if (disc < 0.0) return 0.0;
    return std::max(0.0, std::sqrt(disc) - r * std::cos(theta));
}

double clamped_acos(double x) { return std::acos(std::clamp(x, -1.0, 1.0)); }

// conditional expansion angle of the thick cap [r1, r2] seen from radius r_y
double expansion_angle(double r1, double r2, double r_y, double nd) {
    if (r1 > 0.0 && r_y <= std::sqrt(r1 * r1 + nd)) {
        return clamped_acos((r1 * r1 + r_y * r_y - nd) / (2.0 * r1 * r_y));
    }
    if (r_y >= std::sqrt(r2 * r2 + nd)) {
        return clamped_acos((r2 * r2 + r_y * r_y - nd) / (2.0 * r2 * r_y));
    }
    return std::asin(std::min(1.0, std::sqrt(nd) / r_y));
}

double ln_to_log2(double v) { return v / kLn2; }

// shared integral core; thin cap is r1 == r2
double log_thick_core(double r1, double r2, double theta, int n, double D) {
    if (!(theta >= 0.0 && theta <= kPi))
        throw std::domain_error("cap expansion: theta outside [0, pi]");
    if (!(r1 >= 0.0) || !(r2 >= r1) || !std::isfinite(r2))
        throw std::domain_error("cap expansion: need 0 <= r1 <= r2 < inf");
    if (!(D > 0.0)) throw std::domain_error("cap expansion: D must be positive");
    const double nd = n * D;
    const double sq = std::sqrt(nd);

    const double lo = std::max(0.0, r1 - sq);
    const double hi = r2 + sq;
    const double r_deg = degenerate_radius(r1 > 0.0 ? r1 : 0.0, theta, nd);

    // fully covered spheres contribute their chi mass directly
    double total = neg_inf;
    const double deg_hi = std::min(r_deg, hi);
    if (deg_hi > lo) total = log_chi_mass(n, lo, deg_hi);

    const double seg_lo = std::max(lo, deg_hi);
    if (seg_lo < hi) {
        auto log_f = [&](double r_y) {
            if (r_y <= 0.0) return neg_inf;
            const double ang = std::min(kPi, theta + expansion_angle(r1, r2, r_y, nd));
            return log_cap_fraction(ang, n) + log_chi_pdf(r_y, n);
        };
        std::vector<double> brk{std::sqrt(r1 * r1 + nd), std::sqrt(r2 * r2 + nd)};
        total = log_add_exp(
            total, log_integrate_segmented(log_f, seg_lo, hi, std::move(brk), kBoundQuad));
    }
    return total;
}

// common window covering all but e^-600 of the chi mass
std::pair<double, double> chi_window(int n) {
    const double lo = 0.0;
    double hi = std::sqrt(static_cast<double>(n)) + 8.0;
    while (log_gamma_q(0.5 * n, 0.5 * hi * hi) > -600.0) hi *= 1.5;
    return {lo, hi};
}

}  // namespace

double log2_prob_thick_cap_expansion(double r1, double r2, double theta, int n,
                                     double D) {
    if (r1 > r2) throw std::domain_error("prob_thick_cap_expansion: r1 > r2");
    return ln_to_log2(log_thick_core(r1, r2, theta, n, D));
}

double prob_thick_cap_expansion(double r1, double r2, double theta, int n, double D) {
    return std::exp2(log2_prob_thick_cap_expansion(r1, r2, theta, n, D));
}

double log2_prob_thin_cap_expansion(double r, double theta, int n, double D) {
    if (!(r > 0.0)) throw std::domain_error("prob_thin_cap_expansion: r must be positive");
    return ln_to_log2(log_thick_core(r, r, theta, n, D));
}

double prob_thin_cap_expansion(double r, double theta, int n, double D) {
    return std::exp2(log2_prob_thin_cap_expansion(r, theta, n, D));
}

double log2_achievability_bound(int n, double D, const GainCodebook& gain_cb,
                                double theta) {
    double total = neg_inf;
    for (int k = 1; k <= gain_cb.levels(); ++k) {
        const double r1 = gain_cb.boundaries[k - 1];
        const double r2 = gain_cb.boundaries[k];
        const double log_mass = log_chi_mass(n, r1, r2);
        const double r2_eff = std::min(r2, gain_cb.quad_radius);
        const double log_p = log_thick_core(r1, r2_eff, theta, n, D);
        total = log_add_exp(total, log_mass + log_p);
    }
    return ln_to_log2(std::min(0.0, total));
}

double achievability_bound(int n, double D, const GainCodebook& gain_cb, double theta) {
    return std::exp2(log2_achievability_bound(n, D, gain_cb, theta));
}

double log2_genie_bound(int n, double D, double theta) {
    const auto [lo, hi] = chi_window(n);
    auto log_f = [&](double r_x) {
        if (r_x <= 0.0) return neg_inf;
        return log_thick_core(r_x, r_x, theta, n, D) + log_chi_pdf(r_x, n);
    };
    const QuadOptions outer{1e-7, 1e-12, 40};
    return ln_to_log2(std::min(0.0, log_integrate(log_f, std::max(lo, 1e-8), hi, outer)));
}

double genie_bound(int n, double D, double theta) {
    return std::exp2(log2_genie_bound(n, D, theta));
}

double dumer_density(int n) {
    if (n < 4) throw std::domain_error("dumer_density: valid for n >= 4 only");
    const double m = n - 1;
    const double l = std::log2(m);
    return m * l * (0.5 + (2.0 * std::log2(l) + 5.0) / l);
}

double dumer_theta_for_rate(int n, double rate_shape) {
    const double log2_omega = std::log2(dumer_density(n)) - n * rate_shape;
    if (log2_omega > 0.0)
        throw std::domain_error("dumer_theta_for_rate: rate too small for a covering");
    return cap_fraction_inverse_log(log2_omega * kLn2, n);
}

ConverseResult converse_bound(int n, double R, double D) {
    if (!(R > 0.0)) throw std::domain_error("converse_bound: R must be positive");
    if (!(D > 0.0 && D < 2.0)) throw std::domain_error("converse_bound: need 0 < D < 2");

    const double sqrt_d = std::sqrt(D);
    // D'' and feasibility as functions of eta; negative result = infeasible
    auto d_second = [&](double eta) {
        const double root = std::sqrt(1.0 - eta);
        const double base1 = sqrt_d + root - 1.0;
        if (base1 <= 0.0) return -1.0;
        const double dp = base1 * base1;
        if (dp >= D) return -1.0;
        const double base2 = std::sqrt(dp) + root - 1.0;
        if (base2 <= 0.0) return -1.0;
        const double dpp = base2 * base2;
        if (dpp >= dp) return -1.0;
        return dpp;
    };
    auto log_objective = [&](double c, double eta) {
        const double dpp = d_second(eta);
        if (dpp < 0.0 || c <= 0.0 || c >= 1.0 || eta <= 0.0 || eta >= 1.0)
            return neg_inf;
        const double theta_dpp = clamped_acos(1.0 - 0.5 * dpp);
        const double log_pstar = std::log1p(-c) - n * R * kLn2;
        const double phi = cap_fraction_inverse_log(log_pstar, n);
        const double omega_star =
            log_cap_fraction(std::min(kPi, theta_dpp + phi), n);
        const double sn = std::sqrt(static_cast<double>(n));
        const double log_mass =
            log_chi_mass(n, sn * std::sqrt(1.0 - eta), sn * std::sqrt(1.0 + eta));
        return std::log(c) + omega_star + 2.0 * log_mass;
    };

    constexpr int kGrid = 200;
    double best = neg_inf, best_c = 0.0, best_eta = 0.0;
    for (int i = 0; i < kGrid; ++i) {
        const double eta = (i + 0.5) / kGrid;
        if (d_second(eta) < 0.0) continue;
        for (int j = 0; j < kGrid; ++j) {
            const double c = (j + 0.5) / kGrid;
            const double v = log_objective(c, eta);
            if (v > best) {
                best = v;
                best_c = c;
                best_eta = eta;
            }
        }
    }
    ConverseResult out;
    if (best == neg_inf) return out;  // empty feasible region

    // golden-section polish, one axis at a time
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    auto refine = [&](double lo, double hi, auto eval) {
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = eval(x1), f2 = eval(x2);
        for (int it = 0; it < 60; ++it) {
            if (f1 < f2) {
                lo = x1; x1 = x2; f1 = f2;
                x2 = lo + gr * (hi - lo); f2 = eval(x2);
            } else {
                hi = x2; x2 = x1; f2 = f1;
                x1 = hi - gr * (hi - lo); f1 = eval(x1);
            }
        }
        return f1 > f2 ? x1 : x2;
    };
    for (int round = 0; round < 2; ++round) {
        const double span_c = 1.5 / kGrid;
        best_c = refine(std::max(1e-12, best_c - span_c), std::min(1.0 - 1e-12, best_c + span_c),
                        [&](double c) { return log_objective(c, best_eta); });
        const double span_e = 1.5 / kGrid;
        best_eta = refine(std::max(1e-12, best_eta - span_e),
                          std::min(1.0 - 1e-12, best_eta + span_e),
                          [&](double eta) { return log_objective(best_c, eta); });
    }
    best = log_objective(best_c, best_eta);

    out.feasible = true;
    out.c = best_c;
    out.eta = best_eta;
    out.log2_value = ln_to_log2(best);
    out.value = std::exp(best);
    return out;
}

double id_rate(double D) {
    if (D < 0.0) throw std::domain_error("id_rate: negative D");
    if (D >= 2.0) return pos_inf;
    return std::log2(2.0 / (2.0 - D));
}

double id_exponent(double R, double D) {
    const double r_id = id_rate(D);
    if (!(R >= r_id)) throw std::domain_error("id_exponent: R below the identification rate");
    const double asin_term = std::asin(std::exp2(-R));
    auto objective = [&](double rho) {
        const double angle =
            std::min(kHalfPi, asin_term + clamped_acos((2.0 * rho - D) / (2.0 * rho)));
        return (rho - 1.0 - std::log(rho)) / kLn2 - std::log2(std::sin(angle));
    };
    const double lo = 0.5 * D, hi = 1.0;
    // the objective need not be unimodal; scan first, then polish
    constexpr int kScan = 4000;
    double best = pos_inf, best_rho = hi;
    for (int i = 0; i <= kScan; ++i) {
        const double rho = lo + (hi - lo) * i / kScan;
        const double v = objective(rho);
        if (v < best) {
            best = v;
            best_rho = rho;
        }
    }
    double a = std::max(lo, best_rho - (hi - lo) / kScan);
    double b = std::min(hi, best_rho + (hi - lo) / kScan);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = objective(x1), f2 = objective(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 > f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a); f2 = objective(x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a); f1 = objective(x1);
        }
    }
    return std::max(0.0, std::min({best, f1, f2}));
}

RateSplit best_rate_split(int n, double R, double D, const std::vector<int>& level_grid) {
    if (level_grid.empty()) throw std::domain_error("best_rate_split: empty grid");
    RateSplit best;
    best.log2_bound = pos_inf;
    bool found = false;
    for (int levels : level_grid) {
        if (levels < 1) continue;
        const double r_g = std::log2(static_cast<double>(levels)) / n;
        const double r_s = R - r_g;
        if (r_s <= 0.0) continue;
        double theta;
        try {
            theta = dumer_theta_for_rate(n, r_s);
        } catch (const std::domain_error&) {
            continue;
        }
        const GainCodebook cb = train_gain_codebook(n, levels);
        const double v = log2_achievability_bound(n, D, cb, theta);
        if (!found || v < best.log2_bound) {
            found = true;
            best = {levels, r_g, r_s, theta, v};
        }
    }
    if (!found) throw std::domain_error("best_rate_split: no feasible split on the grid");
    return best;
}

}  // namespace sqid
