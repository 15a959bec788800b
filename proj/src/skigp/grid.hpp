#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

namespace skigp {

/// Cartesian product of per-axis sorted 1D inducing-point lists. The flat
/// index of grid point (i_0, ..., i_{D-1}) is row-major with axis 0 slowest,
/// matching the Kronecker factor order K_0 (x) ... (x) K_{D-1}.
class ProductGrid {
 public:
  static ProductGrid regular(std::span<const double> lo, std::span<const double> hi,
                             std::span<const int> points_per_axis);
  static ProductGrid from_axes(std::vector<std::vector<double>> axes);

  int dim() const { return static_cast<int>(axes_.size()); }
  std::int64_t size() const { return m_; }
  const std::vector<double>& axis(int p) const { return axes_[static_cast<std::size_t>(p)]; }
  bool axis_equispaced(int p) const { return equispaced_[static_cast<std::size_t>(p)]; }

  double lo(int p) const { return axes_[static_cast<std::size_t>(p)].front(); }
  double hi(int p) const { return axes_[static_cast<std::size_t>(p)].back(); }

  /// All bounding-box membership checks are closed-interval.
  bool contains(std::span<const double> x) const;

  /// Flat-index stride of axis p (product of later axis lengths).
  std::int64_t stride(int p) const;

  /// Materialize all m grid points, one per row (test/desk use).
  Eigen::MatrixXd points() const;

 private:
  std::vector<std::vector<double>> axes_;
  std::vector<bool> equispaced_;
  std::int64_t m_ = 0;
};

/// Sorted 1D cluster centers from Lloyd's algorithm with k-means++ seeding.
/// Deterministic for a fixed seed; capped at 100 iterations and stops as
/// soon as assignments are stable.
std::vector<double> kmeans_axis(std::span<const double> x, int m, std::uint64_t seed);

}  // namespace skigp
