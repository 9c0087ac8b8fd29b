#pragma once

namespace dine {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace dine
