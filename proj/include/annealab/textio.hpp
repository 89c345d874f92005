#pragma once

#include <cstdio>
#include <string>

namespace annealab {

// %.{digits}g formatting; the project-wide widths are 12 significant digits
// for CSV payloads and 17 for instance files (exact double round-trip).
inline std::string format_sig(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

inline std::string csv_num(double v) { return format_sig(v, 12); }
inline std::string exact_num(double v) { return format_sig(v, 17); }

}  // namespace annealab
