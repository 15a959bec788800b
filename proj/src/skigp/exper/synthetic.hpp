#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace skigp::exper {

/// Sorted 1D inputs drawn from N(0, stddev^2); no grid structure.
Eigen::VectorXd sorted_gaussian_inputs(int n, double stddev, std::uint64_t seed);

/// Regularly sampled synthetic signal: a sum of amplitude-modulated
/// sinusoids plus white noise, n samples at 1 kHz.
struct Signal {
  Eigen::VectorXd t;
  Eigen::VectorXd y;
};
Signal make_am_signal(int n, double noise_std, std::uint64_t seed);

}  // namespace skigp::exper
