#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace copulab::detail {

/// Locale-independent %g rendering; infinities print as "inf".
inline std::string num(double x, int digits = 10) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

}  // namespace copulab::detail
