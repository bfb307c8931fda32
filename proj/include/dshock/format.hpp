#pragma once

#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>

namespace dshock {

/// Shortest-stable decimal form used by every CSV export: 17 significant digits.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv_row(std::ostream& os, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) os << ',';
    os << fmt17(v);
    first = false;
  }
  os << '\n';
}

}  // namespace dshock
