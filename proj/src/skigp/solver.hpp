#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace skigp {

struct CgConfig {
  double tol = 1e-8;      // relative residual target, ||b - Ax|| / ||b||
  int max_iters = 1000;
  bool record_residuals = false;
};

struct SolveReport {
  Eigen::VectorXd x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  std::vector<double> residual_history;  // filled when record_residuals is set
};

using LinOp = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Plain (unpreconditioned) conjugate gradients for a symmetric PD operator.
/// The true residual is recomputed every 50 iterations to limit drift.
SolveReport cg_solve(const LinOp& apply_a, const Eigen::VectorXd& b, const CgConfig& cfg = {});

/// sum_i log(max(lambda_i, 0) + sigma2).
double logdet_exact(std::span<const double> eigenvalues, double sigma2);

/// Scaled-eigenvalue approximation of log|K^(n) + sigma2 I| from the m grid
/// eigenvalues (sorted nonincreasing): the largest min(n, m) eigenvalues are
/// scaled by n/m; when n > m the remaining n-m terms contribute log(sigma2).
double logdet_scaled(std::span<const double> eigenvalues_desc, std::int64_t n, double sigma2);

}  // namespace skigp
