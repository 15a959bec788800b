#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "skigp/grid.hpp"

namespace skigp {

enum class InterpScheme { Linear, Cubic, Idw };

const char* interp_scheme_name(InterpScheme s);
InterpScheme interp_scheme_from_name(const std::string& name);

/// Per-axis interpolation stencil: `count` consecutive node indices and
/// their weights. Weights always sum to 1; a query exactly on a node yields
/// the canonical one-hot stencil.
struct AxisWeights {
  std::array<std::int64_t, 4> idx{};
  std::array<double, 4> w{};
  int count = 0;
};

/// Two bracketing nodes, weights proportional to the opposite distances.
AxisWeights linear_weights(double x, std::span<const double> axis);

/// Four consecutive nodes on an equispaced axis (length >= 4); weights fit
/// the local cubic through the stencil, so cubics sampled on the axis are
/// reproduced exactly. Near the ends the stencil shifts inward.
AxisWeights cubic_weights(double x, std::span<const double> axis);

/// Two bracketing nodes, weights proportional to 1/distance; intended for
/// irregular (e.g. k-means) axes.
AxisWeights idw_weights(double x, std::span<const double> axis);

/// Row-sparse n x m interpolation matrix with a fixed count of c^D
/// nonzeros per row (c = 2 linear/IDW, c = 4 cubic). Immutable once built.
class SparseWeights {
 public:
  SparseWeights(std::int64_t rows, std::int64_t cols, int row_nnz);

  std::int64_t rows() const { return rows_; }
  std::int64_t cols() const { return cols_; }
  int row_nnz() const { return row_nnz_; }

  std::span<const std::int64_t> row_indices(std::int64_t i) const {
    return {indices_.data() + i * row_nnz_, static_cast<std::size_t>(row_nnz_)};
  }
  std::span<const double> row_values(std::int64_t i) const {
    return {values_.data() + i * row_nnz_, static_cast<std::size_t>(row_nnz_)};
  }
  void set_row(std::int64_t i, std::span<const std::int64_t> idx, std::span<const double> w);

  /// out = W v. Accumulation order within a row is fixed (ascending slot),
  /// so results are bitwise reproducible.
  void apply(std::span<const double> v, std::span<double> out) const;
  /// out = W^T v.
  void apply_transpose(std::span<const double> v, std::span<double> out) const;

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& v) const;

  Eigen::MatrixXd to_dense() const;

  /// Debug dump: one "row col value" triplet per line.
  void export_triplets(std::ostream& os) const;

 private:
  std::int64_t rows_;
  std::int64_t cols_;
  int row_nnz_;
  std::vector<std::int64_t> indices_;
  std::vector<double> values_;
};

/// Tensor-product interpolation matrix for the inputs (row-per-point) onto
/// the grid. Every input must lie inside the grid bounding box; the cubic
/// scheme additionally requires equispaced axes of length >= 4.
SparseWeights build_weights(const Eigen::MatrixXd& x, const ProductGrid& grid,
                            InterpScheme scheme);

}  // namespace skigp
