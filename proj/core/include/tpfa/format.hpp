#ifndef TPFA_FORMAT_HPP
#define TPFA_FORMAT_HPP

#include <cstdio>
#include <string>

namespace tpfa {

/// Shortest decimal form that round-trips a double exactly
inline std::string format_full(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  if (back == x) {
    for (int prec = 1; prec < 17; ++prec) {
      char shorter[32];
      std::snprintf(shorter, sizeof(shorter), "%.*g", prec, x);
      std::sscanf(shorter, "%lf", &back);
      if (back == x) return shorter;
    }
  }
  return buf;
}

}  // namespace tpfa

#endif
