#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

namespace skigp {

enum class KernelFamily { Rbf, SpectralMixture, Product };

/// Stationary covariance function with log-space hyperparameters.
///
/// Families:
///   Rbf(D)             k(x,z) = s2 * exp(-0.5 ||x-z||^2 / ell^2)
///   SpectralMixture(Q) k(tau)  = sum_q w_q exp(-2 pi^2 tau^2 v_q) cos(2 pi tau mu_q), 1D only
///   Product            k(x,z) = prod_p k_p(x_p, z_p), one 1D factor per input dimension
///
/// All positive-constrained parameters are stored as logs so the learning
/// layer can optimize them unconstrained; factories take natural values.
/// Immutable apart from set_hypers_raw; safe to share across threads.
class Kernel {
 public:
  static Kernel rbf(int input_dim, double lengthscale, double signal_variance = 1.0);
  static Kernel spectral_mixture(std::vector<double> weights, std::vector<double> means,
                                 std::vector<double> variances);
  static Kernel product(std::vector<Kernel> factors);

  KernelFamily family() const { return family_; }
  int input_dim() const { return input_dim_; }
  int sm_components() const { return q_; }

  double eval(std::span<const double> x, std::span<const double> z) const;
  double eval1(double x, double z) const;

  /// k(x,x); independent of x for these stationary families.
  double variance_at_zero() const;

  /// Dense covariance matrix K[i][j] = k(x1_i, x2_j); inputs are row-per-point.
  Eigen::MatrixXd matrix(const Eigen::MatrixXd& x1, const Eigen::MatrixXd& x2) const;

  /// 1D kernel governing a single axis, for Kronecker/Toeplitz factorization.
  /// Product returns its factor; Rbf splits the signal variance evenly so the
  /// factor product reproduces the joint kernel.
  Kernel axis_factor(int axis) const;

  /// First column of K_{U,U} on an equispaced 1D grid: c[t] = k(t * dx).
  /// Throws StructureError when relative spacing deviation exceeds 1e-9.
  std::vector<double> toeplitz_column(std::span<const double> axis) const;

  std::size_t num_hypers() const;
  std::vector<double> hypers_raw() const;
  void set_hypers_raw(std::span<const double> raw);
  std::vector<std::string> hyper_names() const;

  const std::vector<Kernel>& factors() const { return factors_; }

  /// One-line description for manifests, e.g. "rbf dim=2" or "sm q=3".
  std::string describe() const;

 private:
  Kernel() = default;
  double eval_tau2_1d(double tau) const;  // leaf families, 1D separation

  KernelFamily family_ = KernelFamily::Rbf;
  int input_dim_ = 1;
  int q_ = 0;                    // SpectralMixture component count
  std::vector<double> raw_;      // log-space leaf parameters
  std::vector<Kernel> factors_;  // Product only
};

/// True when every consecutive spacing matches the mean spacing to
/// a 1e-9 relative tolerance. Single-point axes count as equispaced.
bool is_equispaced(std::span<const double> axis);

}  // namespace skigp
