#pragma once

namespace sqid {

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace sqid
