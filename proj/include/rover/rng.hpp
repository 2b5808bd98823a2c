#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace rover {

// Deterministic random source.  All distributions are derived explicitly from
// the raw engine output so a (seed, call-sequence) pair always reproduces the
// same stream, independent of standard-library internals.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via the Box-Muller pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Uniform integer in [0, n).
  size_t below(size_t n) {
    return static_cast<size_t>((static_cast<__uint128_t>(engine_()) * n) >> 64);
  }

  uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rover
