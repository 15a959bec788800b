#include <algorithm>
#include <stdexcept>

#include "skigp/exper/experiments.hpp"
#include "skigp/exper/internal.hpp"
#include "skigp/exper/synthetic.hpp"
#include "skigp/gp.hpp"

namespace skigp::exper {

namespace {

constexpr const char* kAllowedKeys[] = {
    "experiment", "seed",    "n",       "input_std", "lengthscale",
    "signal_variance", "m_sweep", "schemes", "pad_cells", "out",
};

// Regular padded grid shared by linear/cubic/globalgp; k-means grid for idw.
ProductGrid make_grid(const std::string& scheme, const Eigen::VectorXd& x, int m, int pad_cells,
                      std::uint64_t seed) {
  const double lo = x.minCoeff();
  const double hi = x.maxCoeff();
  if (scheme == "idw") {
    std::vector<double> centers =
        kmeans_axis(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())), m, seed);
    // Appending the bounding-box endpoints keeps every input inside the grid.
    centers.push_back(lo);
    centers.push_back(hi);
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
    return ProductGrid::from_axes({std::move(centers)});
  }
  return ProductGrid::from_axes({padded_axis(lo, hi, m, pad_cells)});
}

}  // namespace

std::vector<MetricsRow> run_reconstruct(const Config& cfg, const std::string& out_dir) {
  cfg.validate_keys(kAllowedKeys);
  const std::uint64_t seed = cfg.get_u64("seed", 42);
  const int n = cfg.get_int("n", 1000);
  if (n > 2000) throw std::invalid_argument("reconstruct: n capped at 2000 (dense oracle)");
  const double input_std = cfg.get_double("input_std", 5.0);
  const double ell = cfg.get_double("lengthscale", 2.0);
  const double s2 = cfg.get_double("signal_variance", 1.0);
  const std::vector<int> m_sweep = cfg.get_int_list("m_sweep", {10, 20, 40, 80, 160});
  const std::vector<std::string> schemes =
      cfg.get_string_list("schemes", {"linear", "cubic", "idw", "globalgp"});
  const int pad_cells = cfg.get_int("pad_cells", 2);

  const Eigen::VectorXd x1d = sorted_gaussian_inputs(n, input_std, seed);
  Eigen::MatrixXd x(n, 1);
  x.col(0) = x1d;

  const Kernel kernel = Kernel::rbf(1, ell, s2);
  const Eigen::MatrixXd k_true = kernel.matrix(x, x);

  std::vector<MetricsRow> rows;
  for (const std::string& scheme : schemes) {
    for (int m : m_sweep) {
      if (m < 2) throw std::invalid_argument("reconstruct: m must be >= 2");
      MetricsRow row;
      row.method = scheme;

      StopWatch build;
      const ProductGrid grid = make_grid(scheme, x1d, m, pad_cells, seed);
      row.m = grid.size();
      const Eigen::MatrixXd u = grid.points();
      const Eigen::MatrixXd kuu = kernel.matrix(u, u);

      Eigen::MatrixXd k_approx;
      if (scheme == "globalgp") {
        // Global GP interpolation weights W_GP = K_XU K_UU^-1 substituted
        // into W K_UU W^T collapse to the SoR kernel.
        const Eigen::MatrixXd kxu = kernel.matrix(x, u);
        const Eigen::LLT<Eigen::MatrixXd> llt =
            chol_with_jitter(kuu, kernel.variance_at_zero(), "reconstruct globalgp");
        row.build_time_s = build.seconds();
        StopWatch solve;
        k_approx = kxu * llt.solve(kxu.transpose());
        row.mae = (k_true - k_approx).cwiseAbs().mean();
        row.solve_time_s = solve.seconds();
      } else {
        const SparseWeights w = build_weights(x, grid, interp_scheme_from_name(scheme));
        row.build_time_s = build.seconds();
        StopWatch solve;
        const Eigen::MatrixXd wd = w.to_dense();
        k_approx = wd * kuu * wd.transpose();
        row.mae = (k_true - k_approx).cwiseAbs().mean();
        row.solve_time_s = solve.seconds();
      }
      rows.push_back(std::move(row));
    }
  }

  emit_metrics(rows, out_path(out_dir, "metrics.csv"));
  write_manifest(cfg, out_dir, {"experiment = reconstruct"});
  return rows;
}

}  // namespace skigp::exper
