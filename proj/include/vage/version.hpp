#pragma once

namespace vage {

inline constexpr const char* kToolName = "vage";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace vage
