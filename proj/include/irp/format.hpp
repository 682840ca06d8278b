#pragma once

#include <cstdio>
#include <string>

namespace irp {

/// Numeric output format shared by every CSV writer: 12 significant digits.
inline std::string fmt12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace irp
