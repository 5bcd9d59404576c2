#pragma once

#include <cmath>
#include <numbers>

namespace ringres {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Absolute tolerance for comparing angles derived from coordinates.
inline constexpr double kAngleTol = 1e-9;
// Tolerance for residuals accumulated around cycles and for integer snapping
// of ring lengths and slot phases.
inline constexpr double kResidualTol = 1e-6;
// Two arrivals closer than this (in periods) are simultaneous.
inline constexpr double kSimultaneityTol = 1e-9;

// Maps any angle into [0, 2pi). Values within kAngleTol below 2pi snap to 0.
inline double normalize_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi - kAngleTol) r = 0.0;
  return r;
}

// Signed representative of an angle in (-pi, pi].
inline double wrap_signed(double a) {
  double r = std::fmod(a + kPi, kTwoPi);
  if (r < 0) r += kTwoPi;
  r -= kPi;
  if (r <= -kPi) r += kTwoPi;
  return r;
}

// Smallest distance between two angles on the circle.
inline double angle_distance(double a, double b) {
  return std::abs(wrap_signed(a - b));
}

inline bool angles_equal(double a, double b, double tol = kAngleTol) {
  return angle_distance(a, b) <= tol;
}

// Arc length swept when travelling from `from` to `to` in direction `dir`
// (+1 counterclockwise, -1 clockwise). Result lies in [0, 2pi).
inline double directed_sweep(double from, double to, int dir) {
  return normalize_angle(dir > 0 ? to - from : from - to);
}

}  // namespace ringres
