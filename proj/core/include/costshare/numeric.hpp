#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace costshare {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative tolerance shared by every equilibrium and optimality comparison.
inline constexpr double kTolerance = 1e-9;

inline double tolerance_scale(double a, double b) { return std::max({1.0, std::fabs(a), std::fabs(b)}); }

inline bool approx_equal(double a, double b, double tol = kTolerance) {
  if (a == b) return true;
  if (std::isinf(a) || std::isinf(b)) return false;
  return std::fabs(a - b) <= tol * tolerance_scale(a, b);
}

// a < b by more than the tolerance.
inline bool definitely_less(double a, double b, double tol = kTolerance) {
  if (std::isinf(b) && !std::isinf(a)) return true;
  if (std::isinf(a)) return false;
  return a < b - tol * tolerance_scale(a, b);
}

}  // namespace costshare
