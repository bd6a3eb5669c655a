#include <cmath>

#include "doctest.h"
#include "sqid/gain.hpp"
#include "sqid/geometry.hpp"
#include "sqid/special.hpp"
#include "sqid/quadrature.hpp"
#include "sqid/rng.hpp"

using namespace sqid;

namespace {

// mean of the chi(n) distribution
double chi_mean(int n) {
    return std::sqrt(2.0) * std::exp(std::lgamma(0.5 * (n + 1)) - std::lgamma(0.5 * n));
}

// brute-force MSE of a two-level quantizer with interior boundary t
double two_level_mse(int n, double t, double hi) {
    auto centroid = [&](double a, double b) {
        const double num = integrate_pos([n](double r) { return r * chi_pdf(r, n); }, a, b);
        return num / chi_mass(n, a, b);
    };
    const double c1 = centroid(0.0, t), c2 = centroid(t, hi);
    auto sq = [&](double a, double b, double c) {
        return integrate_pos(
            [n, c](double r) { return (r - c) * (r - c) * chi_pdf(r, n); }, a, b);
    };
    return sq(0.0, t, c1) + sq(t, hi, c2);
}

}  // namespace

TEST_CASE("single cell codebook is the chi mean") {
    for (int n : {2, 10, 25}) {
        const GainCodebook cb = train_gain_codebook(n, 1);
        REQUIRE(cb.levels() == 1);
        CHECK(cb.boundaries.front() == 0.0);
        CHECK(std::isinf(cb.boundaries.back()));
        CHECK(cb.representatives[0] == doctest::Approx(chi_mean(n)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(train_gain_codebook(10, 0), std::domain_error);
}

TEST_CASE("two-level design matches a grid search on the boundary") {
    const int n = 2;
    const GainCodebook cb = train_gain_codebook(n, 2);
    const double hi = cb.quad_radius;
    double best_t = 0.0, best_mse = pos_inf;
    for (double t = 0.3; t <= 3.0; t += 1e-3) {
        const double m = two_level_mse(n, t, hi);
        if (m < best_mse) {
            best_mse = m;
            best_t = t;
        }
    }
    // refine around the winner with the grid step the oracle promises
    for (double t = best_t - 2e-3; t <= best_t + 2e-3; t += 1e-4) {
        const double m = two_level_mse(n, t, hi);
        if (m < best_mse) {
            best_mse = m;
            best_t = t;
        }
    }
    CHECK(cb.boundaries[1] == doctest::Approx(best_t).epsilon(1e-3));
    CHECK(gain_mse(cb) == doctest::Approx(best_mse).epsilon(1e-6));
}

TEST_CASE("refinement lowers the distortion") {
    const int n = 25;
    const double m2 = gain_mse(train_gain_codebook(n, 2));
    const double m4 = gain_mse(train_gain_codebook(n, 4));
    const double m8 = gain_mse(train_gain_codebook(n, 8));
    CHECK(m8 < m4);
    CHECK(m4 < m2);
}

TEST_CASE("Lloyd-Max fixed point conditions") {
    const int n = 25;
    const GainCodebook cb = train_gain_codebook(n, 6);
    // boundaries are representative midpoints
    for (int k = 1; k < cb.levels(); ++k) {
        CHECK(cb.boundaries[k] ==
              doctest::Approx(0.5 * (cb.representatives[k - 1] + cb.representatives[k]))
                  .epsilon(1e-9));
    }
    // representatives are conditional means
    for (int k = 0; k < cb.levels(); ++k) {
        const double a = cb.boundaries[k];
        const double b = std::min(cb.boundaries[k + 1], cb.quad_radius);
        const double num =
            integrate_pos([n](double r) { return r * chi_pdf(r, n); }, a, b);
        const double cent = num / chi_mass(n, a, b);
        CHECK(cb.representatives[k] == doctest::Approx(cent).epsilon(1e-8));
        CHECK(cb.representatives[k] > cb.boundaries[k]);
        CHECK(cb.representatives[k] < cb.boundaries[k + 1]);
    }
}

TEST_CASE("training is deterministic") {
    const GainCodebook a = train_gain_codebook(25, 5);
    const GainCodebook b = train_gain_codebook(25, 5);
    CHECK(a.boundaries == b.boundaries);
    CHECK(a.representatives == b.representatives);
}

TEST_CASE("quantize_gain: binary search equals a linear scan") {
    const GainCodebook cb = train_gain_codebook(25, 8);
    CHECK(quantize_gain(cb, 0.0) == 1);
    for (int k = 0; k < cb.levels(); ++k) {
        CHECK(quantize_gain(cb, cb.representatives[k]) == k + 1);
    }
    CHECK_THROWS_AS(quantize_gain(cb, -0.5), std::domain_error);
    Rng rng(3);
    for (int t = 0; t < 10000; ++t) {
        const double r = 12.0 * rng.uniform();
        const int k = quantize_gain(cb, r);
        int want = cb.levels();
        for (int j = 1; j <= cb.levels(); ++j) {
            if (r < cb.boundaries[j]) {
                want = j;
                break;
            }
        }
        CHECK(k == want);
        // admissibility support: exact interval membership
        CHECK(r >= cb.boundaries[k - 1]);
        CHECK(r <= cb.boundaries[k]);
    }
}

TEST_CASE("serialization round trip") {
    const GainCodebook cb = train_gain_codebook(25, 4);
    const GainCodebook back = parse_gain_codebook(serialize_gain_codebook(cb));
    CHECK(back.n == cb.n);
    CHECK(back.boundaries == cb.boundaries);
    CHECK(back.representatives == cb.representatives);
}
