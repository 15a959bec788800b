#include "skigp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "skigp/kernels.hpp"
#include "skigp/rng.hpp"

namespace skigp {

ProductGrid ProductGrid::regular(std::span<const double> lo, std::span<const double> hi,
                                 std::span<const int> points_per_axis) {
  if (lo.size() != hi.size() || lo.size() != points_per_axis.size() || lo.empty()) {
    throw std::invalid_argument("grid: bounds/points arrays must be nonempty and equal length");
  }
  std::vector<std::vector<double>> axes(lo.size());
  for (std::size_t p = 0; p < lo.size(); ++p) {
    const int n = points_per_axis[p];
    if (n < 2) throw std::invalid_argument("grid: points_per_axis must be >= 2");
    if (!(lo[p] < hi[p])) throw std::invalid_argument("grid: degenerate bounds, need lo < hi");
    axes[p].resize(static_cast<std::size_t>(n));
    const double dx = (hi[p] - lo[p]) / static_cast<double>(n - 1);
    for (int i = 0; i < n; ++i) axes[p][static_cast<std::size_t>(i)] = lo[p] + dx * i;
    axes[p].back() = hi[p];
  }
  return from_axes(std::move(axes));
}

ProductGrid ProductGrid::from_axes(std::vector<std::vector<double>> axes) {
  if (axes.empty()) throw std::invalid_argument("grid: need at least one axis");
  ProductGrid g;
  g.m_ = 1;
  for (const std::vector<double>& axis : axes) {
    if (axis.size() < 2) throw std::invalid_argument("grid: each axis needs >= 2 points");
    for (std::size_t i = 0; i + 1 < axis.size(); ++i) {
      if (!(axis[i] < axis[i + 1])) {
        throw std::invalid_argument("grid: axis values must be strictly increasing");
      }
    }
    g.m_ *= static_cast<std::int64_t>(axis.size());
    g.equispaced_.push_back(is_equispaced(axis));
  }
  g.axes_ = std::move(axes);
  return g;
}

bool ProductGrid::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) {
    throw std::invalid_argument("grid: point dimension mismatch");
  }
  for (std::size_t p = 0; p < axes_.size(); ++p) {
    if (x[p] < axes_[p].front() || x[p] > axes_[p].back()) return false;
  }
  return true;
}

std::int64_t ProductGrid::stride(int p) const {
  std::int64_t s = 1;
  for (std::size_t q = static_cast<std::size_t>(p) + 1; q < axes_.size(); ++q) {
    s *= static_cast<std::int64_t>(axes_[q].size());
  }
  return s;
}

Eigen::MatrixXd ProductGrid::points() const {
  Eigen::MatrixXd pts(m_, dim());
  for (std::int64_t flat = 0; flat < m_; ++flat) {
    std::int64_t rem = flat;
    for (int p = dim() - 1; p >= 0; --p) {
      const std::int64_t len = static_cast<std::int64_t>(axes_[static_cast<std::size_t>(p)].size());
      pts(flat, p) = axes_[static_cast<std::size_t>(p)][static_cast<std::size_t>(rem % len)];
      rem /= len;
    }
  }
  return pts;
}

std::vector<double> kmeans_axis(std::span<const double> x, int m, std::uint64_t seed) {
  if (m < 2) throw std::invalid_argument("kmeans_axis: m must be >= 2");
  if (x.empty()) throw std::invalid_argument("kmeans_axis: empty input");
  std::set<double> distinct(x.begin(), x.end());
  if (static_cast<std::size_t>(m) > distinct.size()) {
    throw std::invalid_argument("kmeans_axis: m exceeds the number of distinct inputs");
  }

  const std::size_t n = x.size();
  GaussianSampler rng(seed);

  // k-means++ seeding on the 1D points.
  std::vector<double> centers;
  centers.reserve(static_cast<std::size_t>(m));
  centers.push_back(x[static_cast<std::size_t>(rng.uniform() * static_cast<double>(n))]);
  std::vector<double> d2(n);
  while (centers.size() < static_cast<std::size_t>(m)) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (double c : centers) best = std::min(best, (x[i] - c) * (x[i] - c));
      d2[i] = best;
      total += best;
    }
    if (total <= 0.0) {
      // All points coincide with a center; pick the next unused distinct value.
      for (double v : distinct) {
        if (std::find(centers.begin(), centers.end(), v) == centers.end()) {
          centers.push_back(v);
          break;
        }
      }
      continue;
    }
    double r = rng.uniform() * total;
    std::size_t pick = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      r -= d2[i];
      if (r <= 0.0) {
        pick = i;
        break;
      }
    }
    centers.push_back(x[pick]);
  }

  // Lloyd iterations; convergence = assignments stop changing.
  std::vector<int> assign(n, -1);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double bestd = std::numeric_limits<double>::infinity();
      for (int c = 0; c < m; ++c) {
        const double d = std::abs(x[i] - centers[static_cast<std::size_t>(c)]);
        if (d < bestd) {
          bestd = d;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    if (!changed) break;
    std::vector<double> sum(static_cast<std::size_t>(m), 0.0);
    std::vector<int> count(static_cast<std::size_t>(m), 0);
    for (std::size_t i = 0; i < n; ++i) {
      sum[static_cast<std::size_t>(assign[i])] += x[i];
      ++count[static_cast<std::size_t>(assign[i])];
    }
    for (int c = 0; c < m; ++c) {
      if (count[static_cast<std::size_t>(c)] > 0) {
        centers[static_cast<std::size_t>(c)] =
            sum[static_cast<std::size_t>(c)] / count[static_cast<std::size_t>(c)];
      }
    }
  }

  std::sort(centers.begin(), centers.end());
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
  return centers;
}

}  // namespace skigp
