#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace skigp {

// Deterministic Gaussian stream: mt19937_64 plus an explicit Box-Muller
// transform, so a fixed seed yields the same values on every platform
// (std::normal_distribution is implementation-defined and would not).
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::uint64_t next_u64() { return rng_(); }

  // Standard normal.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace skigp
