#pragma once

namespace hcube {

inline constexpr const char* version_string = "1.0.0";
inline constexpr const char* rng_identifier = "splitmix64-ctr/v1";

}  // namespace hcube
