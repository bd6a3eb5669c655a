#include "sqid/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sqid/special.hpp"

namespace sqid {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = 1.57079632679489661923;
}  // namespace

ThickCap::ThickCap(Eigen::VectorXd c, double theta, double r1, double r2)
    : center(std::move(c)), half_angle(theta), r_inner(r1), r_outer(r2) {
    if (std::fabs(center.norm() - 1.0) > 1e-12)
        throw std::domain_error("ThickCap: center must be a unit vector");
    if (!(theta >= 0.0 && theta <= kPi))
        throw std::domain_error("ThickCap: half_angle outside [0, pi]");
    if (!(r1 >= 0.0) || !(r2 >= r1))
        throw std::domain_error("ThickCap: need 0 <= r_inner <= r_outer");
}

double angle_between(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2) {
    const double n1 = x1.norm();
    const double n2 = x2.norm();
    if (n1 == 0.0 || n2 == 0.0)
        throw std::domain_error("angle_between: zero vector");
    const double c = std::clamp(x1.dot(x2) / (n1 * n2), -1.0, 1.0);
    return std::acos(c);
}

double log_cap_fraction(double theta, int n) {
    if (n < 2) throw std::domain_error("cap_fraction: n must be >= 2");
    if (!(theta >= 0.0 && theta <= kPi))
        throw std::domain_error("cap_fraction: theta outside [0, pi]");
    if (theta == 0.0) return neg_inf;
    if (theta > kHalfPi) {
        return std::log(cap_fraction(theta, n));
    }
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double a = 0.5 * (n - 1);
    // x = sin^2, complement passed as cos^2 to dodge the 1 - x cancellation
    return std::log(0.5) + log_beta_inc_xc(a, 0.5, s * s, c * c);
}

double cap_fraction(double theta, int n) {
    if (n < 2) throw std::domain_error("cap_fraction: n must be >= 2");
    if (!(theta >= 0.0 && theta <= kPi))
        throw std::domain_error("cap_fraction: theta outside [0, pi]");
    if (theta > kHalfPi) return 1.0 - cap_fraction(kPi - theta, n);
    return std::exp(log_cap_fraction(theta, n));
}

double cap_fraction_inverse_log(double log_p, int n) {
    if (log_p == neg_inf) return 0.0;
    if (!(log_p <= 0.0)) throw std::domain_error("cap_fraction_inverse: p > 1");
    if (log_p == 0.0) return kPi;
    // on [0, pi/2] compare logs; above, fall back to the complement
    if (log_p > std::log(0.5)) {
        const double p = std::exp(log_p);
        double lo = kHalfPi, hi = kPi;
        for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
            const double mid = 0.5 * (lo + hi);
            (cap_fraction(mid, n) < p ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
    double lo = 0.0, hi = kHalfPi;
    for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
        const double mid = 0.5 * (lo + hi);
        (log_cap_fraction(mid, n) < log_p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double cap_fraction_inverse(double p, int n) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("cap_fraction_inverse: p outside [0, 1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return kPi;
    return cap_fraction_inverse_log(std::log(p), n);
}

double log_chi_pdf(double r, int n) {
    if (n < 1) throw std::domain_error("chi_pdf: n must be >= 1");
    if (r < 0.0) throw std::domain_error("chi_pdf: negative radius");
    if (r == 0.0) return n == 1 ? 0.5 * std::log(2.0 / kPi) : neg_inf;
    return (1.0 - 0.5 * n) * std::log(2.0) + (n - 1) * std::log(r) - 0.5 * r * r -
           std::lgamma(0.5 * n);
}

double chi_pdf(double r, int n) { return std::exp(log_chi_pdf(r, n)); }

double chi_cdf(double r, int n) {
    if (r <= 0.0) return 0.0;
    return gamma_p(0.5 * n, 0.5 * r * r);
}

double chi_sf(double r, int n) {
    if (r <= 0.0) return 1.0;
    return gamma_q(0.5 * n, 0.5 * r * r);
}

double log_chi_mass(int n, double r1, double r2) {
    if (!(r1 >= 0.0) || !(r2 >= r1))
        throw std::domain_error("chi_mass: need 0 <= r1 <= r2");
    const double a = 0.5 * n;
    const double x1 = 0.5 * r1 * r1;
    const double x2 = 0.5 * r2 * r2;
    if (std::isinf(r2)) {
        return r1 == 0.0 ? 0.0 : log_gamma_q(a, x1);
    }
    if (x2 <= a) {
        // left tail: difference of lower tails
        return log_sub_exp(log_gamma_p(a, x2), r1 == 0.0 ? neg_inf : log_gamma_p(a, x1));
    }
    if (x1 >= a) {
        // right tail: difference of upper tails
        return log_sub_exp(log_gamma_q(a, x1), log_gamma_q(a, x2));
    }
    // straddles the bulk; linear difference is well conditioned
    const double m = gamma_p(a, x2) - gamma_p(a, x1);
    return m > 0.0 ? std::log(m) : neg_inf;
}

double chi_mass(int n, double r1, double r2) {
    return std::exp(log_chi_mass(n, r1, r2));
}

double chi_quantile(int n, double p) {
    if (!(p >= 0.0 && p < 1.0))
        throw std::domain_error("chi_quantile: p outside [0, 1)");
    if (p == 0.0) return 0.0;
    double hi = std::sqrt(static_cast<double>(n)) + 2.0;
    while (chi_cdf(hi, n) < p) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (chi_cdf(mid, n) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double chi_tail_radius(int n, double eps) {
    double hi = std::sqrt(static_cast<double>(n)) + 2.0;
    while (chi_sf(hi, n) >= eps) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (chi_sf(mid, n) >= eps ? lo : hi) = mid;
    }
    return hi;
}

double min_dist_to_thick_cap(double r_y, double phi, const ThickCap& cap) {
    const double theta = cap.half_angle;
    if (phi <= theta) {
        // nearest point is radial
        return std::max({cap.r_inner - r_y, r_y - cap.r_outer, 0.0});
    }
    // nearest point sits on the cone boundary at angle theta; clamp its
    // radius to the shell
    const double delta = phi - theta;
    const double rho = std::clamp(r_y * std::cos(delta), cap.r_inner, cap.r_outer);
    const double d2 = r_y * r_y + rho * rho - 2.0 * r_y * rho * std::cos(delta);
    return std::sqrt(std::max(0.0, d2));
}

bool expansion_contains(const Eigen::VectorXd& y, const ThickCap& cap, double D, int n) {
    if (!(D > 0.0)) throw std::domain_error("expansion_contains: D must be positive");
    if (y.size() != cap.center.size() || y.size() != n)
        throw std::domain_error("expansion_contains: dimension mismatch");
    const double r_y = y.norm();
    const double phi = r_y == 0.0 ? 0.0 : angle_between(y, cap.center);
    return min_dist_to_thick_cap(r_y, phi, cap) <= std::sqrt(n * D);
}

}  // namespace sqid
