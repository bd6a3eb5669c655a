#pragma once

namespace sqid::detail {

/// Integer Leech generator rows; the lattice basis is rows / sqrt(8).
extern const int kLeechRows[24][24];

}  // namespace sqid::detail
