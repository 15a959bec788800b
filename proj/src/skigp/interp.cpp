#include "skigp/interp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "skigp/errors.hpp"
#include "skigp/kernels.hpp"

namespace skigp {

const char* interp_scheme_name(InterpScheme s) {
  switch (s) {
    case InterpScheme::Linear:
      return "linear";
    case InterpScheme::Cubic:
      return "cubic";
    case InterpScheme::Idw:
      return "idw";
  }
  return "?";
}

InterpScheme interp_scheme_from_name(const std::string& name) {
  if (name == "linear") return InterpScheme::Linear;
  if (name == "cubic") return InterpScheme::Cubic;
  if (name == "idw") return InterpScheme::Idw;
  throw std::invalid_argument("interp: unknown scheme '" + name + "'");
}

namespace {

// Index of the left-closed cell containing x: largest i with axis[i] <= x,
// clamped to a valid cell start. Assumes x inside [axis.front(), axis.back()].
std::int64_t locate_cell(double x, std::span<const double> axis) {
  auto it = std::upper_bound(axis.begin(), axis.end(), x);
  std::int64_t i = static_cast<std::int64_t>(it - axis.begin()) - 1;
  return std::clamp<std::int64_t>(i, 0, static_cast<std::int64_t>(axis.size()) - 2);
}

void check_range(double x, std::span<const double> axis, const char* op) {
  if (axis.size() < 2) throw std::invalid_argument(std::string(op) + ": axis needs >= 2 points");
  if (x < axis.front() || x > axis.back()) {
    throw std::out_of_range(std::string(op) + ": query outside the grid span");
  }
}

}  // namespace

AxisWeights linear_weights(double x, std::span<const double> axis) {
  check_range(x, axis, "linear_weights");
  const std::int64_t i = locate_cell(x, axis);
  AxisWeights out;
  out.count = 2;
  out.idx = {i, i + 1, 0, 0};
  const double a = axis[static_cast<std::size_t>(i)];
  const double b = axis[static_cast<std::size_t>(i + 1)];
  if (x == a) {
    out.w = {1.0, 0.0, 0.0, 0.0};
  } else if (x == b) {
    out.w = {0.0, 1.0, 0.0, 0.0};
  } else {
    const double wl = (b - x) / (b - a);
    out.w = {wl, 1.0 - wl, 0.0, 0.0};
  }
  return out;
}

AxisWeights idw_weights(double x, std::span<const double> axis) {
  check_range(x, axis, "idw_weights");
  const std::int64_t i = locate_cell(x, axis);
  AxisWeights out;
  out.count = 2;
  out.idx = {i, i + 1, 0, 0};
  const double d0 = x - axis[static_cast<std::size_t>(i)];
  const double d1 = axis[static_cast<std::size_t>(i + 1)] - x;
  if (d0 == 0.0) {
    out.w = {1.0, 0.0, 0.0, 0.0};
  } else if (d1 == 0.0) {
    out.w = {0.0, 1.0, 0.0, 0.0};
  } else {
    // w ~ 1/distance, normalized.
    const double w0 = d1 / (d0 + d1);
    out.w = {w0, 1.0 - w0, 0.0, 0.0};
  }
  return out;
}

AxisWeights cubic_weights(double x, std::span<const double> axis) {
  check_range(x, axis, "cubic_weights");
  if (axis.size() < 4) throw StructureError("cubic_weights: axis needs >= 4 points");
  if (!is_equispaced(axis)) throw StructureError("cubic_weights: axis must be equispaced");

  const std::int64_t cell = locate_cell(x, axis);
  // Centered stencil {cell-1 .. cell+2}, shifted inward at the ends.
  const std::int64_t s =
      std::clamp<std::int64_t>(cell - 1, 0, static_cast<std::int64_t>(axis.size()) - 4);

  AxisWeights out;
  out.count = 4;
  for (int j = 0; j < 4; ++j) out.idx[static_cast<std::size_t>(j)] = s + j;

  // Exact-node queries collapse to one-hot below (the Lagrange products hit
  // zero numerators exactly), but shortcut for clarity.
  for (int j = 0; j < 4; ++j) {
    if (x == axis[static_cast<std::size_t>(s + j)]) {
      out.w = {0.0, 0.0, 0.0, 0.0};
      out.w[static_cast<std::size_t>(j)] = 1.0;
      return out;
    }
  }

  // Weights of the cubic through the 4 stencil nodes (Lagrange form), which
  // reproduces cubic polynomials sampled on the axis.
  double t[4];
  for (int j = 0; j < 4; ++j) t[j] = axis[static_cast<std::size_t>(s + j)];
  double sum = 0.0;
  for (int j = 0; j < 4; ++j) {
    double w = 1.0;
    for (int k = 0; k < 4; ++k) {
      if (k == j) continue;
      w *= (x - t[k]) / (t[j] - t[k]);
    }
    out.w[static_cast<std::size_t>(j)] = w;
    sum += w;
  }
  // Renormalize away round-off so rows sum to 1 tightly.
  for (int j = 0; j < 4; ++j) out.w[static_cast<std::size_t>(j)] /= sum;
  return out;
}

SparseWeights::SparseWeights(std::int64_t rows, std::int64_t cols, int row_nnz)
    : rows_(rows), cols_(cols), row_nnz_(row_nnz) {
  if (rows < 0 || cols <= 0 || row_nnz <= 0) {
    throw std::invalid_argument("SparseWeights: bad shape");
  }
  indices_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(row_nnz), 0);
  values_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(row_nnz), 0.0);
}

void SparseWeights::set_row(std::int64_t i, std::span<const std::int64_t> idx,
                            std::span<const double> w) {
  if (idx.size() != static_cast<std::size_t>(row_nnz_) || w.size() != idx.size()) {
    throw std::invalid_argument("SparseWeights: row slot count mismatch");
  }
  for (std::int64_t c : idx) {
    if (c < 0 || c >= cols_) throw std::invalid_argument("SparseWeights: column out of range");
  }
  std::copy(idx.begin(), idx.end(), indices_.begin() + i * row_nnz_);
  std::copy(w.begin(), w.end(), values_.begin() + i * row_nnz_);
}

void SparseWeights::apply(std::span<const double> v, std::span<double> out) const {
  if (v.size() != static_cast<std::size_t>(cols_) || out.size() != static_cast<std::size_t>(rows_)) {
    throw std::invalid_argument("SparseWeights: apply dimension mismatch");
  }
  for (std::int64_t i = 0; i < rows_; ++i) {
    const std::int64_t* idx = indices_.data() + i * row_nnz_;
    const double* w = values_.data() + i * row_nnz_;
    double acc = 0.0;
    for (int j = 0; j < row_nnz_; ++j) acc += w[j] * v[static_cast<std::size_t>(idx[j])];
    out[static_cast<std::size_t>(i)] = acc;
  }
}

void SparseWeights::apply_transpose(std::span<const double> v, std::span<double> out) const {
  if (v.size() != static_cast<std::size_t>(rows_) || out.size() != static_cast<std::size_t>(cols_)) {
    throw std::invalid_argument("SparseWeights: apply_transpose dimension mismatch");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::int64_t i = 0; i < rows_; ++i) {
    const std::int64_t* idx = indices_.data() + i * row_nnz_;
    const double* w = values_.data() + i * row_nnz_;
    const double vi = v[static_cast<std::size_t>(i)];
    for (int j = 0; j < row_nnz_; ++j) out[static_cast<std::size_t>(idx[j])] += w[j] * vi;
  }
}

Eigen::VectorXd SparseWeights::apply(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(rows_);
  apply(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())),
        std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

Eigen::VectorXd SparseWeights::apply_transpose(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(cols_);
  apply_transpose(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())),
                  std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

Eigen::MatrixXd SparseWeights::to_dense() const {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(rows_, cols_);
  for (std::int64_t i = 0; i < rows_; ++i) {
    const std::int64_t* idx = indices_.data() + i * row_nnz_;
    const double* w = values_.data() + i * row_nnz_;
    for (int j = 0; j < row_nnz_; ++j) dense(i, idx[j]) += w[j];
  }
  return dense;
}

void SparseWeights::export_triplets(std::ostream& os) const {
  for (std::int64_t i = 0; i < rows_; ++i) {
    const std::int64_t* idx = indices_.data() + i * row_nnz_;
    const double* w = values_.data() + i * row_nnz_;
    for (int j = 0; j < row_nnz_; ++j) {
      os << i << ' ' << idx[j] << ' ';
      os.precision(17);
      os << w[j] << '\n';
    }
  }
}

SparseWeights build_weights(const Eigen::MatrixXd& x, const ProductGrid& grid,
                            InterpScheme scheme) {
  const int dim = grid.dim();
  if (x.cols() != dim) throw std::invalid_argument("build_weights: input dimension mismatch");

  const int c = scheme == InterpScheme::Cubic ? 4 : 2;
  int row_nnz = 1;
  for (int p = 0; p < dim; ++p) row_nnz *= c;

  SparseWeights w(x.rows(), grid.size(), row_nnz);

  std::vector<AxisWeights> aw(static_cast<std::size_t>(dim));
  std::vector<std::int64_t> idx_buf(static_cast<std::size_t>(row_nnz));
  std::vector<double> val_buf(static_cast<std::size_t>(row_nnz));
  std::vector<std::int64_t> strides(static_cast<std::size_t>(dim));
  for (int p = 0; p < dim; ++p) strides[static_cast<std::size_t>(p)] = grid.stride(p);

  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (int p = 0; p < dim; ++p) {
      const std::vector<double>& axis = grid.axis(p);
      const double xi = x(i, p);
      switch (scheme) {
        case InterpScheme::Linear:
          aw[static_cast<std::size_t>(p)] = linear_weights(xi, axis);
          break;
        case InterpScheme::Cubic:
          aw[static_cast<std::size_t>(p)] = cubic_weights(xi, axis);
          break;
        case InterpScheme::Idw:
          aw[static_cast<std::size_t>(p)] = idw_weights(xi, axis);
          break;
      }
    }
    // Tensor product over per-axis stencils, lexicographic slot order.
    for (int slot = 0; slot < row_nnz; ++slot) {
      std::int64_t col = 0;
      double val = 1.0;
      int rem = slot;
      for (int p = dim - 1; p >= 0; --p) {
        const int j = rem % c;
        rem /= c;
        col += aw[static_cast<std::size_t>(p)].idx[static_cast<std::size_t>(j)] *
               strides[static_cast<std::size_t>(p)];
        val *= aw[static_cast<std::size_t>(p)].w[static_cast<std::size_t>(j)];
      }
      idx_buf[static_cast<std::size_t>(slot)] = col;
      val_buf[static_cast<std::size_t>(slot)] = val;
    }
    w.set_row(i, idx_buf, val_buf);
  }
  return w;
}

}  // namespace skigp
