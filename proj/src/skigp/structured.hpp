#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "skigp/fft.hpp"

namespace skigp {

/// Eigendecomposition A = Q V Q^T with eigenvalues sorted nonincreasing.
/// For Kronecker operators Q is kept in factored form and applied
/// factor-wise; the sort permutation bridges factored (natural) order and
/// the sorted eigenvalue order.
class EigenSystem {
 public:
  EigenSystem(Eigen::VectorXd values_sorted_desc, std::vector<Eigen::MatrixXd> factor_q,
              std::vector<std::int64_t> perm_sorted_to_natural);

  std::int64_t size() const { return values_.size(); }
  const Eigen::VectorXd& eigenvalues() const { return values_; }

  /// Eigenvalues with negatives from round-off clamped to 0; reports how
  /// many were clamped.
  Eigen::VectorXd clamped_eigenvalues(int* clamped_count = nullptr) const;

  Eigen::VectorXd multiply_q(const Eigen::VectorXd& v) const;
  Eigen::VectorXd multiply_qt(const Eigen::VectorXd& v) const;

 private:
  Eigen::VectorXd values_;
  std::vector<Eigen::MatrixXd> factor_q_;
  std::vector<std::int64_t> perm_;  // sorted slot -> natural (factored) index
};

/// Symmetric m x m operator in dense, symmetric-Toeplitz, or Kronecker form.
///
/// Toeplitz matvecs run through a circulant embedding of size 2^k >= 2m-1
/// and the module FFT; the embedded spectrum is precomputed at construction.
/// Kronecker matvecs apply factors mode-by-mode, left to right. All forms are
/// immutable after construction and re-entrant (per-call scratch only).
class StructuredMatrix {
 public:
  enum class Form { Dense, Toeplitz, Kronecker };

  static StructuredMatrix dense(Eigen::MatrixXd symmetric);
  static StructuredMatrix toeplitz(std::vector<double> first_column);
  static StructuredMatrix kronecker(std::vector<StructuredMatrix> factors);

  Form form() const { return form_; }
  std::int64_t size() const { return m_; }
  const std::vector<StructuredMatrix>& factors() const { return factors_; }
  const std::vector<double>& toeplitz_column() const { return column_; }

  void matvec(std::span<const double> in, std::span<double> out) const;
  Eigen::VectorXd matvec(const Eigen::VectorXd& v) const;

  /// Exact dense expansion; test/oracle use, guarded by the size cap.
  Eigen::MatrixXd to_dense(std::int64_t cap = 4096) const;

  EigenSystem eig() const;

  double trace() const;

 private:
  StructuredMatrix() = default;

  Form form_ = Form::Dense;
  std::int64_t m_ = 0;

  Eigen::MatrixXd dense_;        // Dense
  std::vector<double> column_;   // Toeplitz
  std::shared_ptr<const FftPlan> plan_;                 // Toeplitz
  std::vector<std::complex<double>> spectrum_;          // FFT of circulant column
  std::vector<StructuredMatrix> factors_;               // Kronecker
};

/// Applies `op` (mapping length-n blocks to length-n blocks) along the middle
/// mode of a row-major (left, n, right) tensor. Used for Kronecker matvecs,
/// factored Q applications, and Kronecker-Cholesky sampling.
void apply_along_mode(std::span<const double> in, std::span<double> out, std::int64_t left,
                      std::int64_t n, std::int64_t right,
                      const std::function<void(std::span<const double>, std::span<double>)>& op);

}  // namespace skigp
