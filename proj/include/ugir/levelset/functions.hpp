#pragma once

// Smoothed Dirac/Heaviside pair and the double-well distance potential used
// by the distance-regularized level set.

#include <cmath>
#include <numbers>

namespace ugir::levelset {

inline double smoothed_dirac(double x, double eps) {
  if (std::abs(x) > eps) return 0.0;
  return (1.0 / (2.0 * eps)) * (1.0 + std::cos(std::numbers::pi * x / eps));
}

inline double smoothed_heaviside(double x, double eps) {
  if (x <= -eps) return 0.0;
  if (x >= eps) return 1.0;
  return 0.5 * (1.0 + x / eps + std::sin(std::numbers::pi * x / eps) / std::numbers::pi);
}

/// p(s): minima at s = 0 and s = 1.
inline double double_well(double s) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (s <= 1.0) return (1.0 - std::cos(two_pi * s)) / (two_pi * two_pi);
  return 0.5 * (s - 1.0) * (s - 1.0);
}

/// d_p(s) = p'(s) / s, with d_p(0) = 1 by continuity.
inline double double_well_rate(double s) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (s == 0.0) return 1.0;
  if (s <= 1.0) return std::sin(two_pi * s) / (two_pi * s);
  return (s - 1.0) / s;
}

}  // namespace ugir::levelset
