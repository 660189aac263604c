#pragma once

namespace crossbell {

inline constexpr const char* kToolVersion = "0.1.0";
/// Bumped whenever a JSON report layout changes.
inline constexpr int kSchemaVersion = 1;

} // namespace crossbell
