#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace onticlab {

// The standard distributions are implementation-defined; these helpers only
// rely on the raw mt19937_64 stream so seeded runs are portable.

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal deviate via Box-Muller.
inline double standard_normal(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline std::complex<double> complex_normal(std::mt19937_64& rng) {
  const double re = standard_normal(rng);
  const double im = standard_normal(rng);
  return {re, im};
}

} // namespace onticlab
