#pragma once

#include <string>
#include <vector>

#include "skigp/exper/config.hpp"
#include "skigp/exper/metrics.hpp"
#include "skigp/grid.hpp"

namespace skigp::exper {

/// Regular 1D axis over [lo, hi] widened by `pad_cells` grid cells on each
/// side, keeping `points` total nodes, so every data point is interior.
std::vector<double> padded_axis(double lo, double hi, int points, int pad_cells = 2);

/// Covariance reconstruction sweep over interpolation schemes and grid
/// sizes; writes metrics.csv and manifest.txt under out_dir.
std::vector<MetricsRow> run_reconstruct(const Config& cfg, const std::string& out_dir);

/// Product-kernel recovery with spectral-mixture learning, SKI (Kronecker
/// grid) versus FITC; writes metrics.csv, kernel_curves.csv, model
/// manifests, and manifest.txt.
std::vector<MetricsRow> run_kernel_learning(const Config& cfg, const std::string& out_dir);

/// Gap infill on a 1D signal with SKI (Toeplitz grid) and FITC m-sweeps;
/// writes metrics.csv and manifest.txt.
std::vector<MetricsRow> run_infill(const Config& cfg, const std::string& out_dir);

/// Dispatch by experiment name ("reconstruct", "kernel-learn", "infill").
std::vector<MetricsRow> run_experiment(const std::string& name, const Config& cfg,
                                       const std::string& out_dir);

}  // namespace skigp::exper
