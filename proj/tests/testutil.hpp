#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "skigp/rng.hpp"

namespace testutil {

inline Eigen::MatrixXd random_points(int n, int dim, double scale, std::uint64_t seed) {
  skigp::GaussianSampler rng(seed);
  Eigen::MatrixXd x(n, dim);
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < dim; ++d) x(i, d) = scale * rng.normal();
  }
  return x;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::uint64_t seed) {
  skigp::GaussianSampler rng(seed);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

// Textbook Kronecker product, independent of the library implementation.
inline Eigen::MatrixXd kron_oracle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace testutil
