#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

namespace skigp {

struct NlcgOptions {
  int max_iters = 100;
  int max_evals = 5000;       // objective evaluation budget (includes gradients)
  double grad_tol = 1e-5;     // stop when ||g||_inf drops below
  double fd_step = 1e-4;      // central-difference step
  double initial_step = 0.5;  // first line-search trial step along d/||d||_inf
  bool verbose = false;
};

struct NlcgResult {
  Eigen::VectorXd x;           // best point found
  double f = 0.0;              // objective at x
  std::vector<double> trace;   // accepted objective values, x0 first
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;      // gradient tolerance reached
  bool eval_budget_hit = false;
};

/// Minimizes f by Polak-Ribiere nonlinear conjugate gradients with
/// central-difference gradients and a backtracking line search. NaN or
/// infinite objective values are treated as rejections (the line search
/// backtracks past them). Deterministic for a fixed f and x0.
NlcgResult nlcg_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                         Eigen::VectorXd x0, const NlcgOptions& opts = {});

}  // namespace skigp
