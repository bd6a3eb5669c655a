#include "sqid/gain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "sqid/geometry.hpp"
#include "sqid/quadrature.hpp"
#include "sqid/special.hpp"

namespace sqid {

namespace {

const QuadOptions kGainQuad{1e-9, 1e-11, 52};

// conditional mean of r over [a, b] under the chi(n) density
double cell_centroid(int n, double a, double b) {
    auto log_rf = [n](double r) {
        return (r > 0.0 ? std::log(r) : neg_inf) + log_chi_pdf(r, n);
    };
    const double log_num = log_integrate(log_rf, a, b, kGainQuad);
    const double log_den = log_chi_mass(n, a, b);
    return std::exp(log_num - log_den);
}

double cell_mse(int n, double a, double b, double rep) {
    auto log_sq = [n, rep](double r) {
        const double d = r - rep;
        return (d != 0.0 ? 2.0 * std::log(std::fabs(d)) : neg_inf) + log_chi_pdf(r, n);
    };
    return std::exp(log_integrate(log_sq, a, b, kGainQuad));
}

}  // namespace

GainCodebook train_gain_codebook(int n, int levels) {
    if (levels < 1) throw std::domain_error("train_gain_codebook: K must be >= 1");
    if (n < 1) throw std::domain_error("train_gain_codebook: n must be >= 1");

    GainCodebook cb;
    cb.n = n;
    cb.quad_radius = chi_tail_radius(n, 1e-16);

    const int K = levels;
    cb.representatives.resize(K);
    for (int k = 0; k < K; ++k) {
        cb.representatives[k] = chi_quantile(n, (k + 0.5) / K);
    }
    cb.boundaries.assign(K + 1, 0.0);
    cb.boundaries[K] = pos_inf;

    double prev_mse = pos_inf;
    for (int iter = 0; iter < 10000; ++iter) {
        for (int k = 1; k < K; ++k) {
            cb.boundaries[k] = 0.5 * (cb.representatives[k - 1] + cb.representatives[k]);
        }
        double mse = 0.0;
        for (int k = 0; k < K; ++k) {
            const double a = cb.boundaries[k];
            const double b = std::min(cb.boundaries[k + 1], cb.quad_radius);
            cb.representatives[k] = cell_centroid(n, a, b);
            mse += cell_mse(n, a, b, cb.representatives[k]);
        }
        if (prev_mse < pos_inf && std::fabs(prev_mse - mse) <= 1e-10 * prev_mse) break;
        prev_mse = mse;
    }
    for (int k = 1; k < K; ++k) {
        cb.boundaries[k] = 0.5 * (cb.representatives[k - 1] + cb.representatives[k]);
    }
    return cb;
}

int quantize_gain(const GainCodebook& cb, double r) {
    if (r < 0.0) throw std::domain_error("quantize_gain: negative radius");
    const auto it = std::upper_bound(cb.boundaries.begin(), cb.boundaries.end(), r);
    const auto k = static_cast<int>(it - cb.boundaries.begin());
    return std::clamp(k, 1, cb.levels());
}

double gain_mse(const GainCodebook& cb) {
    double mse = 0.0;
    for (int k = 0; k < cb.levels(); ++k) {
        const double a = cb.boundaries[k];
        const double b = std::min(cb.boundaries[k + 1], cb.quad_radius);
        mse += cell_mse(cb.n, a, b, cb.representatives[k]);
    }
    return mse;
}

std::string serialize_gain_codebook(const GainCodebook& cb) {
    std::ostringstream out;
    char buf[64];
    out << cb.n << " " << cb.levels() << "\n";
    for (std::size_t i = 0; i < cb.boundaries.size(); ++i) {
        if (std::isinf(cb.boundaries[i])) {
            out << (i ? " " : "") << "inf";
        } else {
            std::snprintf(buf, sizeof buf, "%.17g", cb.boundaries[i]);
            out << (i ? " " : "") << buf;
        }
    }
    out << "\n";
    for (std::size_t i = 0; i < cb.representatives.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", cb.representatives[i]);
        out << (i ? " " : "") << buf;
    }
    out << "\n";
    return out.str();
}

GainCodebook parse_gain_codebook(const std::string& text) {
    std::istringstream in(text);
    GainCodebook cb;
    int K = 0;
    if (!(in >> cb.n >> K) || K < 1 || cb.n < 1)
        throw std::runtime_error("gain codebook: bad header");
    cb.boundaries.resize(K + 1);
    for (auto& b : cb.boundaries) {
        std::string tok;
        if (!(in >> tok)) throw std::runtime_error("gain codebook: truncated boundaries");
        b = (tok == "inf") ? pos_inf : std::stod(tok);
    }
    cb.representatives.resize(K);
    for (auto& r : cb.representatives) {
        if (!(in >> r)) throw std::runtime_error("gain codebook: truncated representatives");
    }
    cb.quad_radius = chi_tail_radius(cb.n, 1e-16);
    return cb;
}

}  // namespace sqid
