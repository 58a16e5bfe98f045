#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace equidyn {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Raised when a state or group action leaves the scenario chart.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised on malformed families, scenario files or expressions.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Wrap an angle into [0, 2*pi).
inline double wrap_2pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Wrap an angle into (-pi, pi].
inline double wrap_pm_pi(double a) {
  double r = wrap_2pi(a);
  if (r > kPi) r -= kTwoPi;
  return r;
}

/// Minimal distance between two angles on the circle.
inline double angle_distance(double a, double b) {
  return std::fabs(wrap_pm_pi(a - b));
}

inline double sqr(double v) { return v * v; }

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Deterministic splitmix64 stream. Used instead of <random> distributions so
/// that seeded reports are byte-identical across compilers and thread counts.
struct Rng {
  std::uint64_t state = 0;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    state += 0x9e3779b97f4a7c15ull;
    return mix64(state);
  }

  /// Uniform in [0, 1).
  double unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  double angle() { return uniform(0.0, kTwoPi); }

  /// Standard normal via Box-Muller (no cached spare, keeps streams simple).
  double normal() {
    double u1 = 0.0;
    do { u1 = unit(); } while (u1 <= 0.0);
    double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  int index(int n) { return int(next_u64() % std::uint64_t(n)); }
};

/// Independent substream for sample `idx` of a seeded run.
inline Rng substream(std::uint64_t seed, std::uint64_t idx) {
  return Rng(mix64(seed ^ 0x5851f42d4c957f2dull) ^ mix64(idx + 0x14057b7ef767814full));
}

}  // namespace equidyn
