#include "skigp/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace skigp {

SolveReport cg_solve(const LinOp& apply_a, const Eigen::VectorXd& b, const CgConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("cg_solve: tol must be > 0");
  if (cfg.max_iters < 1) throw std::invalid_argument("cg_solve: max_iters must be >= 1");

  SolveReport rep;
  const double bnorm = b.norm();
  rep.x = Eigen::VectorXd::Zero(b.size());
  if (bnorm == 0.0) {
    rep.converged = true;
    return rep;
  }

  Eigen::VectorXd r = b;  // r = b - A*0
  Eigen::VectorXd p = r;
  Eigen::VectorXd ap(b.size());
  double rr = r.squaredNorm();
  rep.relative_residual = std::sqrt(rr) / bnorm;
  if (cfg.record_residuals) rep.residual_history.push_back(rep.relative_residual);
  if (rep.relative_residual <= cfg.tol) {
    rep.converged = true;
    return rep;
  }

  for (int it = 1; it <= cfg.max_iters; ++it) {
    apply_a(p, ap);
    const double pap = p.dot(ap);
    if (!(pap > 0.0)) {
      // Operator not PD along p (or round-off stall); stop with current iterate.
      rep.iterations = it - 1;
      rep.converged = rep.relative_residual <= cfg.tol;
      return rep;
    }
    const double alpha = rr / pap;
    rep.x += alpha * p;
    if (it % 50 == 0) {
      apply_a(rep.x, ap);
      r = b - ap;
    } else {
      r -= alpha * ap;
    }
    const double rr_new = r.squaredNorm();
    rep.iterations = it;
    rep.relative_residual = std::sqrt(rr_new) / bnorm;
    if (cfg.record_residuals) rep.residual_history.push_back(rep.relative_residual);
    if (rep.relative_residual <= cfg.tol) {
      rep.converged = true;
      return rep;
    }
    const double beta = rr_new / rr;
    p = r + beta * p;
    rr = rr_new;
  }
  rep.converged = false;
  return rep;
}

double logdet_exact(std::span<const double> eigenvalues, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("logdet_exact: sigma2 must be > 0");
  double sum = 0.0;
  for (double lam : eigenvalues) sum += std::log(std::max(lam, 0.0) + sigma2);
  return sum;
}

double logdet_scaled(std::span<const double> eigenvalues_desc, std::int64_t n, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("logdet_scaled: sigma2 must be > 0");
  if (n < 0) throw std::invalid_argument("logdet_scaled: n must be >= 0");
  const std::int64_t m = static_cast<std::int64_t>(eigenvalues_desc.size());
  if (m == 0) return static_cast<double>(n) * std::log(sigma2);
  const double scale = static_cast<double>(n) / static_cast<double>(m);
  const std::int64_t take = std::min(n, m);
  double sum = 0.0;
  for (std::int64_t i = 0; i < take; ++i) {
    sum += std::log(scale * std::max(eigenvalues_desc[static_cast<std::size_t>(i)], 0.0) + sigma2);
  }
  if (n > m) sum += static_cast<double>(n - m) * std::log(sigma2);
  return sum;
}

}  // namespace skigp
