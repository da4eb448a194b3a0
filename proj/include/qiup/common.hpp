#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace qiup {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Wrap an angle to [-pi, pi).
inline double wrap_pi(double x) {
  double y = std::fmod(x + std::numbers::pi, two_pi);
  if (y < 0.0) y += two_pi;
  return y - std::numbers::pi;
}

// Length of the shorter arc between two angles.
inline double circ_dist(double a, double b) { return std::abs(wrap_pi(a - b)); }

// Mean direction of two angles, safe across the wrap.
inline double circ_mean(double a, double b) {
  const double s = 0.5 * (std::sin(a) + std::sin(b));
  const double c = 0.5 * (std::cos(a) + std::cos(b));
  return std::atan2(s, c);
}

// SplitMix64 finalizer, used to derive RNG substreams from seed/index pairs.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// n uniformly spaced phases in [0, 2pi), grid order.
std::vector<double> uniform_phase_grid(std::size_t n);

}  // namespace qiup
