#pragma once

namespace lineage {

inline constexpr const char* kToolName = "lineage";
inline constexpr const char* kToolVersion = "1.0.0";

} // namespace lineage
