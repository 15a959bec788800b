#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace skigp {

std::size_t next_pow2(std::size_t n);

/// Iterative radix-2 complex FFT with precomputed twiddles and bit-reversal
/// table. Self-contained and bit-stable across runs. A plan is immutable
/// after construction; transforms use only caller-provided storage, so one
/// plan can serve concurrent callers.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);  // n must be a power of two (or 1)

  std::size_t size() const { return n_; }

  void forward(std::complex<double>* data) const;
  /// Inverse transform including the 1/n scale.
  void inverse(std::complex<double>* data) const;

 private:
  void transform(std::complex<double>* data, bool inverse_sign) const;

  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> twiddles_;  // exp(-2*pi*i*k/n), k < n/2
};

}  // namespace skigp
