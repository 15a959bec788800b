#include "skigp/exper/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "skigp/rng.hpp"

namespace skigp::exper {

Eigen::VectorXd sorted_gaussian_inputs(int n, double stddev, std::uint64_t seed) {
  GaussianSampler rng(seed);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = stddev * rng.normal();
  std::sort(x.data(), x.data() + n);
  return x;
}

Signal make_am_signal(int n, double noise_std, std::uint64_t seed) {
  GaussianSampler rng(seed);
  Signal s;
  s.t.resize(n);
  s.y.resize(n);
  // Carriers and slow modulation envelopes (Hz at 1 kHz sampling).
  const double freq[3] = {4.0, 6.5, 9.3};
  const double amp[3] = {1.0, 0.6, 0.35};
  const double mod[3] = {0.23, 0.37, 0.52};
  const double phase[3] = {0.3, 1.7, 2.9};
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / 1000.0;
    double v = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double envelope = amp[k] * (1.0 + 0.8 * std::sin(2.0 * M_PI * mod[k] * t + phase[k]));
      v += envelope * std::sin(2.0 * M_PI * freq[k] * t + 0.7 * phase[k]);
    }
    s.t[i] = t;
    s.y[i] = v + noise_std * rng.normal();
  }
  return s;
}

}  // namespace skigp::exper
