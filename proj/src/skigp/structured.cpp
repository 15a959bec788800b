#include "skigp/structured.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "skigp/errors.hpp"

namespace skigp {

namespace {

constexpr std::int64_t kEigFactorCap = 8192;

}  // namespace

EigenSystem::EigenSystem(Eigen::VectorXd values_sorted_desc, std::vector<Eigen::MatrixXd> factor_q,
                         std::vector<std::int64_t> perm_sorted_to_natural)
    : values_(std::move(values_sorted_desc)),
      factor_q_(std::move(factor_q)),
      perm_(std::move(perm_sorted_to_natural)) {}

Eigen::VectorXd EigenSystem::clamped_eigenvalues(int* clamped_count) const {
  Eigen::VectorXd out = values_;
  int count = 0;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out[i] < 0.0) {
      out[i] = 0.0;
      ++count;
    }
  }
  if (clamped_count != nullptr) *clamped_count = count;
  return out;
}

void apply_along_mode(std::span<const double> in, std::span<double> out, std::int64_t left,
                      std::int64_t n, std::int64_t right,
                      const std::function<void(std::span<const double>, std::span<double>)>& op) {
  std::vector<double> slice_in(static_cast<std::size_t>(n));
  std::vector<double> slice_out(static_cast<std::size_t>(n));
  for (std::int64_t l = 0; l < left; ++l) {
    for (std::int64_t r = 0; r < right; ++r) {
      const std::int64_t base = l * n * right + r;
      for (std::int64_t k = 0; k < n; ++k) {
        slice_in[static_cast<std::size_t>(k)] = in[static_cast<std::size_t>(base + k * right)];
      }
      op(slice_in, slice_out);
      for (std::int64_t k = 0; k < n; ++k) {
        out[static_cast<std::size_t>(base + k * right)] = slice_out[static_cast<std::size_t>(k)];
      }
    }
  }
}

StructuredMatrix StructuredMatrix::dense(Eigen::MatrixXd symmetric) {
  if (symmetric.rows() != symmetric.cols() || symmetric.rows() == 0) {
    throw std::invalid_argument("StructuredMatrix: dense form must be square and nonempty");
  }
  const double scale = std::max(1.0, symmetric.cwiseAbs().maxCoeff());
  if ((symmetric - symmetric.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("StructuredMatrix: dense form must be symmetric");
  }
  StructuredMatrix a;
  a.form_ = Form::Dense;
  a.m_ = symmetric.rows();
  a.dense_ = std::move(symmetric);
  return a;
}

StructuredMatrix StructuredMatrix::toeplitz(std::vector<double> first_column) {
  if (first_column.empty()) {
    throw std::invalid_argument("StructuredMatrix: empty Toeplitz column");
  }
  StructuredMatrix a;
  a.form_ = Form::Toeplitz;
  a.m_ = static_cast<std::int64_t>(first_column.size());
  a.column_ = std::move(first_column);

  // Circulant embedding: first power of two >= 2m-1.
  const std::size_t m = a.column_.size();
  const std::size_t len = next_pow2(2 * m - 1);
  a.plan_ = std::make_shared<FftPlan>(len);
  std::vector<std::complex<double>> circ(len, {0.0, 0.0});
  for (std::size_t k = 0; k < m; ++k) circ[k] = a.column_[k];
  for (std::size_t k = 1; k < m; ++k) circ[len - k] = a.column_[k];
  a.plan_->forward(circ.data());
  a.spectrum_ = std::move(circ);
  return a;
}

StructuredMatrix StructuredMatrix::kronecker(std::vector<StructuredMatrix> factors) {
  if (factors.empty()) {
    throw std::invalid_argument("StructuredMatrix: Kronecker form needs factors");
  }
  StructuredMatrix a;
  a.form_ = Form::Kronecker;
  a.m_ = 1;
  for (const StructuredMatrix& f : factors) a.m_ *= f.size();
  a.factors_ = std::move(factors);
  return a;
}

void StructuredMatrix::matvec(std::span<const double> in, std::span<double> out) const {
  if (in.size() != static_cast<std::size_t>(m_) || out.size() != static_cast<std::size_t>(m_)) {
    throw std::invalid_argument("StructuredMatrix: matvec dimension mismatch");
  }
  switch (form_) {
    case Form::Dense: {
      Eigen::Map<const Eigen::VectorXd> v(in.data(), m_);
      Eigen::Map<Eigen::VectorXd> o(out.data(), m_);
      o.noalias() = dense_.selfadjointView<Eigen::Lower>() * v;
      return;
    }
    case Form::Toeplitz: {
      const std::size_t len = plan_->size();
      std::vector<std::complex<double>> buf(len, {0.0, 0.0});
      for (std::size_t i = 0; i < in.size(); ++i) buf[i] = in[i];
      plan_->forward(buf.data());
      for (std::size_t i = 0; i < len; ++i) buf[i] *= spectrum_[i];
      plan_->inverse(buf.data());
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf[i].real();
      return;
    }
    case Form::Kronecker: {
      std::vector<double> cur(in.begin(), in.end());
      std::vector<double> next(static_cast<std::size_t>(m_));
      std::int64_t left = 1;
      std::int64_t right = m_;
      for (const StructuredMatrix& f : factors_) {
        const std::int64_t n = f.size();
        right /= n;
        apply_along_mode(cur, next, left, n, right,
                         [&f](std::span<const double> a, std::span<double> b) { f.matvec(a, b); });
        cur.swap(next);
        left *= n;
      }
      std::copy(cur.begin(), cur.end(), out.begin());
      return;
    }
  }
}

Eigen::VectorXd StructuredMatrix::matvec(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(m_);
  matvec(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())),
         std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

Eigen::MatrixXd StructuredMatrix::to_dense(std::int64_t cap) const {
  if (m_ > cap) throw std::invalid_argument("StructuredMatrix: to_dense size cap exceeded");
  switch (form_) {
    case Form::Dense:
      return dense_;
    case Form::Toeplitz: {
      Eigen::MatrixXd out(m_, m_);
      for (std::int64_t i = 0; i < m_; ++i) {
        for (std::int64_t j = 0; j < m_; ++j) {
          out(i, j) = column_[static_cast<std::size_t>(std::abs(i - j))];
        }
      }
      return out;
    }
    case Form::Kronecker: {
      Eigen::MatrixXd out = Eigen::MatrixXd::Ones(1, 1);
      for (const StructuredMatrix& f : factors_) {
        const Eigen::MatrixXd fd = f.to_dense(cap);
        Eigen::MatrixXd next(out.rows() * fd.rows(), out.cols() * fd.cols());
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
          for (Eigen::Index j = 0; j < out.cols(); ++j) {
            next.block(i * fd.rows(), j * fd.cols(), fd.rows(), fd.cols()) = out(i, j) * fd;
          }
        }
        out = std::move(next);
      }
      return out;
    }
  }
  throw std::logic_error("StructuredMatrix: unknown form");
}

double StructuredMatrix::trace() const {
  switch (form_) {
    case Form::Dense:
      return dense_.trace();
    case Form::Toeplitz:
      return static_cast<double>(m_) * column_[0];
    case Form::Kronecker: {
      double t = 1.0;
      for (const StructuredMatrix& f : factors_) t *= f.trace();
      return t;
    }
  }
  return 0.0;
}

EigenSystem StructuredMatrix::eig() const {
  // Per-factor dense symmetric eigensolve; factors stay at desk scale.
  std::vector<Eigen::VectorXd> factor_vals;
  std::vector<Eigen::MatrixXd> factor_q;
  const std::vector<StructuredMatrix> self_holder;
  const std::vector<StructuredMatrix>& facs =
      form_ == Form::Kronecker ? factors_ : self_holder;

  auto solve_factor = [](const StructuredMatrix& f) {
    if (f.size() > kEigFactorCap) {
      throw std::invalid_argument("StructuredMatrix: eig factor size exceeds dense cap");
    }
    if (f.form() == Form::Kronecker) {
      throw std::invalid_argument("StructuredMatrix: nested Kronecker eig not supported");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f.to_dense(kEigFactorCap));
    if (es.info() != Eigen::Success) throw NumericError("StructuredMatrix: eigensolver failed");
    // Eigen returns ascending order; flip to nonincreasing.
    const Eigen::VectorXd vals = es.eigenvalues().reverse();
    const Eigen::MatrixXd q = es.eigenvectors().rowwise().reverse();
    return std::make_pair(vals, q);
  };

  if (form_ == Form::Kronecker) {
    for (const StructuredMatrix& f : facs) {
      auto [vals, q] = solve_factor(f);
      factor_vals.push_back(std::move(vals));
      factor_q.push_back(std::move(q));
    }
  } else {
    auto [vals, q] = solve_factor(*this);
    factor_vals.push_back(std::move(vals));
    factor_q.push_back(std::move(q));
  }

  // Natural-order eigenvalues are products across factors (row-major flat
  // index, first factor slowest).
  Eigen::VectorXd natural(m_);
  natural.setOnes();
  std::int64_t stride = m_;
  for (const Eigen::VectorXd& vals : factor_vals) {
    const std::int64_t n = vals.size();
    stride /= n;
    for (std::int64_t i = 0; i < m_; ++i) natural[i] *= vals[(i / stride) % n];
  }

  std::vector<std::int64_t> perm(static_cast<std::size_t>(m_));
  std::iota(perm.begin(), perm.end(), std::int64_t{0});
  std::stable_sort(perm.begin(), perm.end(),
                   [&natural](std::int64_t a, std::int64_t b) { return natural[a] > natural[b]; });
  Eigen::VectorXd sorted(m_);
  for (std::int64_t i = 0; i < m_; ++i) sorted[i] = natural[perm[static_cast<std::size_t>(i)]];

  return EigenSystem(std::move(sorted), std::move(factor_q), std::move(perm));
}

Eigen::VectorXd EigenSystem::multiply_qt(const Eigen::VectorXd& v) const {
  if (v.size() != values_.size()) throw std::invalid_argument("EigenSystem: dimension mismatch");
  const std::int64_t m = values_.size();
  std::vector<double> cur(v.data(), v.data() + m);
  std::vector<double> next(static_cast<std::size_t>(m));
  std::int64_t left = 1;
  std::int64_t right = m;
  for (const Eigen::MatrixXd& q : factor_q_) {
    const std::int64_t n = q.rows();
    right /= n;
    apply_along_mode(cur, next, left, n, right,
                     [&q](std::span<const double> a, std::span<double> b) {
                       Eigen::Map<const Eigen::VectorXd> av(a.data(), q.rows());
                       Eigen::Map<Eigen::VectorXd> bv(b.data(), q.rows());
                       bv.noalias() = q.transpose() * av;
                     });
    cur.swap(next);
    left *= n;
  }
  Eigen::VectorXd out(m);
  for (std::int64_t i = 0; i < m; ++i) out[i] = cur[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])];
  return out;
}

Eigen::VectorXd EigenSystem::multiply_q(const Eigen::VectorXd& v) const {
  if (v.size() != values_.size()) throw std::invalid_argument("EigenSystem: dimension mismatch");
  const std::int64_t m = values_.size();
  std::vector<double> cur(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) cur[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])] = v[i];
  std::vector<double> next(static_cast<std::size_t>(m));
  std::int64_t left = 1;
  std::int64_t right = m;
  for (const Eigen::MatrixXd& q : factor_q_) {
    const std::int64_t n = q.rows();
    right /= n;
    apply_along_mode(cur, next, left, n, right,
                     [&q](std::span<const double> a, std::span<double> b) {
                       Eigen::Map<const Eigen::VectorXd> av(a.data(), q.rows());
                       Eigen::Map<Eigen::VectorXd> bv(b.data(), q.rows());
                       bv.noalias() = q * av;
                     });
    cur.swap(next);
    left *= n;
  }
  return Eigen::Map<const Eigen::VectorXd>(cur.data(), m);
}

}  // namespace skigp
