#include "sqid/theta.hpp"

#include <cassert>
#include <stdexcept>

namespace sqid {

namespace {

using Wide = __int128;

// series of prod_{k>=1} (1 - q^k)^24 truncated at degree max_deg
std::vector<Wide> eta24_series(int max_deg) {
    std::vector<Wide> p(max_deg + 1, 0);
    p[0] = 1;
    for (int k = 1; k <= max_deg; ++k) {
        for (int rep = 0; rep < 24; ++rep) {
            // multiply by (1 - q^k) in place
            for (int d = max_deg; d >= k; --d) p[d] -= p[d - k];
        }
    }
    return p;
}

Wide sigma11(int j) {
    Wide s = 0;
    for (int d = 1; d <= j; ++d) {
        if (j % d) continue;
        Wide p = 1;
        for (int e = 0; e < 11; ++e) p *= d;
        s += p;
    }
    return s;
}

}  // namespace

std::vector<BigCount> leech_theta_coefficients(int max_sq_norm) {
    if (max_sq_norm < 0) throw std::domain_error("theta: negative norm bound");
    const int jmax = max_sq_norm / 2;
    // tau(j) from Delta = q prod (1-q^k)^24
    const auto eta = eta24_series(jmax > 0 ? jmax - 1 : 0);
    std::vector<BigCount> coeff(max_sq_norm + 1, 0);
    coeff[0] = 1;
    for (int j = 1; j <= jmax; ++j) {
        const Wide tau = eta[j - 1];
        const Wide num = 65520 * (sigma11(j) - tau);
        assert(num % 691 == 0);
        const Wide n_j = num / 691;
        assert(n_j >= 0);
        if (2 * j <= max_sq_norm) coeff[2 * j] = static_cast<BigCount>(n_j);
    }
    return coeff;
}

std::vector<BigCount> zn_theta_coefficients(int m, int max_sq_norm) {
    if (m < 1) throw std::domain_error("theta: dimension must be positive");
    if (max_sq_norm < 0) throw std::domain_error("theta: negative norm bound");
    // (sum_k q^{k^2})^m with the one-dimensional theta 1 + 2q + 2q^4 + ...
    std::vector<Wide> p(max_sq_norm + 1, 0), next(max_sq_norm + 1, 0);
    p[0] = 1;
    for (int rep = 0; rep < m; ++rep) {
        std::fill(next.begin(), next.end(), 0);
        for (int d = 0; d <= max_sq_norm; ++d) {
            if (p[d] == 0) continue;
            next[d] += p[d];
            for (int k = 1; k * k + d <= max_sq_norm; ++k) {
                next[d + k * k] += 2 * p[d];
            }
        }
        p.swap(next);
    }
    std::vector<BigCount> coeff(max_sq_norm + 1);
    for (int d = 0; d <= max_sq_norm; ++d) coeff[d] = static_cast<BigCount>(p[d]);
    return coeff;
}

}  // namespace sqid
