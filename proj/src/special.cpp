#include "sqid/special.hpp"

#include <cmath>
#include <stdexcept>

namespace sqid {

namespace {

constexpr double kCfEps = 1e-15;
constexpr int kCfMaxIter = 600;
constexpr double kTiny = 1e-300;

// Lentz continued fraction for the incomplete beta; converges for
// x < (a+1)/(a+b+2).
double beta_cf(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kCfMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kCfEps) break;
    }
    return h;
}

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Series for P(a,x), x < a+1; returns log P.
double log_gamma_p_series(double a, double x) {
    if (x <= 0.0) return neg_inf;
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < kCfMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kCfEps) break;
    }
    return -x + a * std::log(x) - std::lgamma(a) + std::log(sum);
}

// Lentz continued fraction for Q(a,x), x >= a+1; returns log Q.
double log_gamma_q_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kCfMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kCfEps) break;
    }
    return -x + a * std::log(x) - std::lgamma(a) + std::log(h);
}

}  // namespace

double log_beta_inc_xc(double a, double b, double x, double xc) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("beta_inc: a, b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("beta_inc: x outside [0, 1]");
    if (x == 0.0) return neg_inf;
    if (xc <= 0.0) return 0.0;
    if (x < (a + 1.0) / (a + b + 2.0)) {
        const double pre =
            a * std::log(x) + b * std::log(xc) - std::log(a) - log_beta(a, b);
        return pre + std::log(beta_cf(a, b, x));
    }
    // complement path; the complement is the small quantity here
    const double pre =
        b * std::log(xc) + a * std::log(x) - std::log(b) - log_beta(b, a);
    const double log_comp = pre + std::log(beta_cf(b, a, xc));
    return std::log1p(-std::exp(log_comp));
}

double log_beta_inc(double a, double b, double x) {
    return log_beta_inc_xc(a, b, x, 1.0 - x);
}

double beta_inc(double a, double b, double x) {
    return std::exp(log_beta_inc(a, b, x));
}

double log_gamma_p(double a, double x) {
    if (!(a > 0.0)) throw std::domain_error("gamma_p: a must be positive");
    if (!(x >= 0.0)) throw std::domain_error("gamma_p: x must be nonnegative");
    if (x == 0.0) return neg_inf;
    if (x < a + 1.0) return log_gamma_p_series(a, x);
    return std::log1p(-std::exp(log_gamma_q_cf(a, x)));
}

double log_gamma_q(double a, double x) {
    if (!(a > 0.0)) throw std::domain_error("gamma_q: a must be positive");
    if (!(x >= 0.0)) throw std::domain_error("gamma_q: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x >= a + 1.0) return log_gamma_q_cf(a, x);
    return std::log1p(-std::exp(log_gamma_p_series(a, x)));
}

double gamma_p(double a, double x) { return std::exp(log_gamma_p(a, x)); }
double gamma_q(double a, double x) { return std::exp(log_gamma_q(a, x)); }

}  // namespace sqid
