#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace trackmon {

// Seeded draws on top of mt19937_64. The uniform and Gaussian transforms are
// spelled out here instead of using <random> distributions, whose output is
// not pinned down by the standard; traces generated with a given seed must be
// reproducible everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller, one value per call.
  double gaussian() {
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace trackmon
