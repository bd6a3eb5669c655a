#pragma once

#include <vector>

#include "sqid/lattice.hpp"

// Theta-series coefficients N_m (number of lattice points of squared
// norm m, base scaling) for the built-in lattices.

namespace sqid {

/// Leech coefficients for m = 0..max_sq_norm. Odd m and m = 2 are zero;
/// N_{2j} = (65520/691) (sigma_11(j) - tau(j)).
std::vector<BigCount> leech_theta_coefficients(int max_sq_norm);

/// Z^m coefficients (sums of m squares) for 0..max_sq_norm.
std::vector<BigCount> zn_theta_coefficients(int m, int max_sq_norm);

}  // namespace sqid
