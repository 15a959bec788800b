#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "skigp/grid.hpp"
#include "skigp/interp.hpp"
#include "skigp/kernels.hpp"
#include "skigp/solver.hpp"
#include "skigp/structured.hpp"

namespace skigp {

struct Dataset {
  Eigen::MatrixXd x;       // n x D
  Eigen::VectorXd y;       // n
  Eigen::MatrixXd x_test;  // optional, 0 rows when absent
  Eigen::VectorXd y_test;

  void validate() const;
  Eigen::Index n() const { return x.rows(); }
  int dim() const { return static_cast<int>(x.cols()); }
};

enum class GpScheme { Exact, Sor, Fitc, Ski };
enum class MeanMode { Zero, Empirical };
enum class LogdetMode { Scaled, ExactDense };

const char* gp_scheme_name(GpScheme s);

/// Gaussian-process regressor with exact, SoR, FITC, or SKI inference.
///
/// The SKI scheme interpolates the training inputs onto the grid
/// (K ~ W K_UU W^T), drives solves through conjugate gradients against the
/// structured operator, and scores the marginal-likelihood complexity term
/// with the scaled-eigenvalue approximation of the grid covariance.
class GpModel {
 public:
  static GpModel exact(Kernel kernel, double sigma2);
  static GpModel sor(Kernel kernel, Eigen::MatrixXd inducing, double sigma2);
  static GpModel fitc(Kernel kernel, Eigen::MatrixXd inducing, double sigma2);
  static GpModel ski(Kernel kernel, ProductGrid grid, InterpScheme scheme, double sigma2);

  void set_data(Eigen::MatrixXd x, Eigen::VectorXd y);
  void set_mean_mode(MeanMode mode);
  void set_cg_config(const CgConfig& cfg);
  void set_logdet_mode(LogdetMode mode);

  GpScheme scheme() const { return scheme_; }
  const Kernel& kernel() const { return kernel_; }
  double sigma2() const { return sigma2_; }
  Eigen::Index data_count() const { return x_.rows(); }
  const ProductGrid& grid() const;
  InterpScheme interp_scheme() const { return interp_; }
  MeanMode mean_mode() const { return mean_mode_; }
  const CgConfig& cg_config() const { return cg_cfg_; }

  /// Precomputes factorizations / interpolation weights for the current
  /// hyperparameters. Called lazily by the query methods.
  void fit();

  Eigen::VectorXd predict_mean(const Eigen::MatrixXd& xs);
  /// Predictive variances (diagonal only), clamped at zero.
  Eigen::VectorXd predict_variance(const Eigen::MatrixXd& xs);
  double log_marginal_likelihood();

  /// True when every conjugate-gradient solve since the last fit converged.
  bool last_solves_converged() const { return cg_ok_; }
  int last_cg_iterations() const { return last_cg_iters_; }
  const std::vector<double>& last_cg_residuals() const { return last_cg_residuals_; }

  /// Flat optimization vector: kernel raw log-hypers followed by log(sigma2).
  Eigen::VectorXd params_raw() const;
  void set_params_raw(const Eigen::VectorXd& raw);
  std::vector<std::string> param_names() const;

  /// Applies the fitted SKI operator (W K_UU W^T + sigma2 I) v.
  Eigen::VectorXd ski_apply(const Eigen::VectorXd& v);
  /// Noise-free SKI covariance application (W K_UU W^T) v.
  Eigen::VectorXd ski_cov_apply(const Eigen::VectorXd& v);

  void save(std::ostream& os) const;
  void save(const std::string& path) const;
  static GpModel load(std::istream& is);
  static GpModel load(const std::string& path);

 private:
  GpModel(GpScheme scheme, Kernel kernel, double sigma2);
  void invalidate() { fitted_ = false; }
  void ensure_fitted();
  double mean_offset() const;
  const EigenSystem& kuu_eigensystem();

  GpScheme scheme_;
  Kernel kernel_;
  double sigma2_;
  MeanMode mean_mode_ = MeanMode::Zero;
  LogdetMode logdet_mode_ = LogdetMode::Scaled;
  CgConfig cg_cfg_{};

  Eigen::MatrixXd inducing_;            // SoR/FITC
  std::optional<ProductGrid> grid_;     // SKI
  InterpScheme interp_ = InterpScheme::Cubic;

  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;

  // Fitted state.
  bool fitted_ = false;
  Eigen::VectorXd alpha_;               // (K + sigma2 I)^-1 (y - mu)
  Eigen::LLT<Eigen::MatrixXd> exact_llt_;
  Eigen::MatrixXd kmm_;                 // jittered K_UU (SoR/FITC)
  Eigen::LLT<Eigen::MatrixXd> kmm_llt_;
  Eigen::MatrixXd knm_;
  Eigen::VectorXd lambda_;              // per-point noise (FITC) or sigma2 (SoR)
  Eigen::LLT<Eigen::MatrixXd> a_llt_;   // K_UU + K_UN Lambda^-1 K_NU
  Eigen::VectorXd beta_;                // A^-1 K_UN Lambda^-1 (y - mu)
  std::optional<SparseWeights> w_;      // SKI
  std::optional<StructuredMatrix> kuu_;
  std::optional<EigenSystem> kuu_eig_;
  bool cg_ok_ = true;
  int last_cg_iters_ = 0;
  std::vector<double> last_cg_residuals_;
};

struct LearnOptions {
  int max_iters = 60;
  int max_evals = 4000;
  double grad_tol = 1e-4;
  double fd_step = 1e-4;   // log-space central-difference step
  double cg_tol = 1e-4;    // looser CG tolerance while learning
  bool verbose = false;
};

struct LearnResult {
  std::vector<double> objective_trace;  // accepted log-marginal-likelihood values
  double best_objective = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  bool eval_budget_hit = false;
};

/// Maximizes the log marginal likelihood over the model's log-space
/// parameters with Polak-Ribiere nonlinear conjugate gradients. The model is
/// left at the best parameters found.
LearnResult learn_hypers(GpModel& model, const LearnOptions& opts = {});

/// Draws `count` prior samples of the SKI process at the rows of x:
/// f = W [chol(K_1) (x) ... (x) chol(K_P)] nu with nu ~ N(0, I). Per-factor
/// jitter of 1e-8 k(0) (retry 1e-6 k(0)) keeps the Cholesky well posed.
/// Returns n x count, one sample per column.
Eigen::MatrixXd sample_prior(const Kernel& kernel, const ProductGrid& grid, InterpScheme scheme,
                             const Eigen::MatrixXd& x, std::uint64_t seed, int count);

/// Subset-of-regressors covariance k_SoR(x,z) = K_xU K_UU^-1 K_Uz.
double sor_cov(const Kernel& kernel, std::span<const double> x, std::span<const double> z,
               const Eigen::MatrixXd& inducing);
/// FITC covariance: SoR plus the diagonal correction restoring k(x,x).
double fitc_cov(const Kernel& kernel, std::span<const double> x, std::span<const double> z,
                const Eigen::MatrixXd& inducing);

/// Cholesky with the K_UU jitter policy: 1e-8 k(0) upfront, one retry at
/// 1e-6 k(0), then NumericError.
Eigen::LLT<Eigen::MatrixXd> chol_with_jitter(const Eigen::MatrixXd& a, double k0,
                                             const char* context);

}  // namespace skigp
