#pragma once

#include <cstdio>
#include <string>

namespace qent {

inline constexpr const char* kToolName = "qent";
inline constexpr const char* kToolVersion = "1.0.0";

// 6 significant digits, '.' decimal separator; stable across runs so CSV
// output is byte-diffable.
inline std::string fmt_g6(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline std::string fmt_g17(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace qent
