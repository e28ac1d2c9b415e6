#pragma once

#include <algorithm>
#include <cmath>

namespace pdag::detail {

// Relative tolerance for comparing path lengths and response times that were
// summed in different orders.
inline constexpr double kTimeTolerance = 1e-9;

inline bool time_eq(double a, double b) {
  return std::abs(a - b) <= kTimeTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}
inline bool time_ge(double a, double b) { return a >= b || time_eq(a, b); }
inline bool time_gt(double a, double b) { return a > b && !time_eq(a, b); }

}  // namespace pdag::detail
