#pragma once

#include <string>
#include <vector>

// Scalar quantizer for the gain G = ||X|| of a Gaussian vector,
// designed with Lloyd-Max under MSE against the chi density.

namespace sqid {

struct GainCodebook {
    int n = 0;                          // source dimension
    std::vector<double> boundaries;     // K+1 values: 0 = r_0 < ... < r_K = +inf
    std::vector<double> representatives;  // K values, one per cell
    double quad_radius = 0.0;  // finite stand-in for +inf in quadrature
                               // (chi tail mass beyond it < 1e-16)

    int levels() const { return static_cast<int>(representatives.size()); }
};

/// Lloyd-Max design for K cells on the chi(n) density. Deterministic:
/// initialized at the (k - 1/2)/K chi quantiles, iterated to a relative
/// MSE change below 1e-10 (at most 10^4 rounds).
GainCodebook train_gain_codebook(int n, int levels);

/// Cell index k in [1, K] with boundaries[k-1] <= r < boundaries[k].
int quantize_gain(const GainCodebook& cb, double r);

/// Expected squared error of the codebook under the chi density.
double gain_mse(const GainCodebook& cb);

/// Plain-text round-trip (decimal, 17 significant digits).
std::string serialize_gain_codebook(const GainCodebook& cb);
GainCodebook parse_gain_codebook(const std::string& text);

}  // namespace sqid
