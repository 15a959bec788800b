#include "skigp/optimize.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace skigp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double guarded(double v) { return std::isfinite(v) ? v : kInf; }

}  // namespace

NlcgResult nlcg_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                         Eigen::VectorXd x0, const NlcgOptions& opts) {
  if (x0.size() == 0) throw std::invalid_argument("nlcg_minimize: empty parameter vector");

  NlcgResult res;
  int evals = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evals;
    return guarded(f(x));
  };

  const Eigen::Index dim = x0.size();
  Eigen::VectorXd x = std::move(x0);
  double fx = eval(x);
  if (!std::isfinite(fx)) {
    throw std::invalid_argument("nlcg_minimize: objective not finite at the initial point");
  }
  res.trace.push_back(fx);
  res.x = x;
  res.f = fx;

  auto gradient = [&](const Eigen::VectorXd& at) {
    Eigen::VectorXd g(dim);
    Eigen::VectorXd probe = at;
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double orig = probe[i];
      probe[i] = orig + opts.fd_step;
      const double fp = eval(probe);
      probe[i] = orig - opts.fd_step;
      const double fm = eval(probe);
      probe[i] = orig;
      // One-sided fallback when a probe lands in a NaN region.
      if (std::isfinite(fp) && std::isfinite(fm)) {
        g[i] = (fp - fm) / (2.0 * opts.fd_step);
      } else if (std::isfinite(fp)) {
        g[i] = (fp - fx) / opts.fd_step;
      } else if (std::isfinite(fm)) {
        g[i] = (fx - fm) / opts.fd_step;
      } else {
        g[i] = 0.0;
      }
    }
    return g;
  };

  Eigen::VectorXd g = gradient(x);
  Eigen::VectorXd d = -g;
  double step_hint = opts.initial_step;

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    res.iterations = iter;
    if (g.lpNorm<Eigen::Infinity>() < opts.grad_tol) {
      res.converged = true;
      break;
    }
    if (evals >= opts.max_evals) {
      res.eval_budget_hit = true;
      break;
    }

    double dg = d.dot(g);
    if (dg >= 0.0) {  // not a descent direction: restart with steepest descent
      d = -g;
      dg = d.dot(g);
    }
    const double dmax = d.lpNorm<Eigen::Infinity>();
    if (dmax == 0.0) {
      res.converged = true;
      break;
    }

    // Backtracking Armijo search; NaN objectives simply fail the test.
    double alpha = step_hint / dmax;
    double f_new = kInf;
    Eigen::VectorXd x_new;
    bool accepted = false;
    for (int bt = 0; bt < 30; ++bt) {
      x_new = x + alpha * d;
      f_new = eval(x_new);
      if (f_new <= fx + 1e-4 * alpha * dg) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
      if (evals >= opts.max_evals) break;
    }
    if (!accepted) {
      if (evals >= opts.max_evals) {
        res.eval_budget_hit = true;
        break;
      }
      // Line search exhausted along this direction; restart once from -g.
      if ((d + g).lpNorm<Eigen::Infinity>() <
          1e-14 * std::max(1.0, g.lpNorm<Eigen::Infinity>())) {
        break;  // already steepest descent: converged as far as we can tell
      }
      d = -g;
      step_hint = opts.initial_step;
      continue;
    }

    // Grow the next trial step after easy accepts, shrink after hard ones.
    step_hint = std::min(4.0, std::max(1e-6, alpha * dmax * 2.0));

    x = std::move(x_new);
    fx = f_new;
    res.trace.push_back(fx);
    if (fx < res.f) {
      res.f = fx;
      res.x = x;
    }
    if (opts.verbose) {
      std::fprintf(stderr, "nlcg iter %d  f=%.10g  evals=%d\n", iter + 1, fx, evals);
    }

    const Eigen::VectorXd g_new = gradient(x);
    // Polak-Ribiere+ with automatic reset.
    const double denom = g.squaredNorm();
    double beta = denom > 0.0 ? g_new.dot(g_new - g) / denom : 0.0;
    beta = std::max(0.0, beta);
    d = -g_new + beta * d;
    g = g_new;
  }

  res.evaluations = evals;
  return res;
}

}  // namespace skigp
