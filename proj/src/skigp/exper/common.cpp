#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "skigp/exper/experiments.hpp"
#include "skigp/exper/internal.hpp"
#include "skigp/version.hpp"

namespace skigp::exper {

std::vector<double> padded_axis(double lo, double hi, int points, int pad_cells) {
  if (points < 2) throw std::invalid_argument("padded_axis: need >= 2 points");
  if (!(lo < hi)) throw std::invalid_argument("padded_axis: degenerate bounds");
  // Spacing such that pad_cells cells sit outside [lo, hi] on both sides.
  const int interior_cells = points - 1 - 2 * pad_cells;
  const double h = interior_cells >= 1 ? (hi - lo) / static_cast<double>(interior_cells)
                                       : (hi - lo) / static_cast<double>(points - 1);
  const double start = interior_cells >= 1 ? lo - pad_cells * h : lo;
  std::vector<double> axis(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) axis[static_cast<std::size_t>(i)] = start + h * i;
  // Guard against round-off leaving the data box uncovered.
  if (axis.front() > lo) axis.front() = lo;
  if (axis.back() < hi) axis.back() = hi;
  return axis;
}

std::string out_path(const std::string& out_dir, const std::string& name) {
  std::filesystem::create_directories(out_dir);
  return (std::filesystem::path(out_dir) / name).string();
}

void write_manifest(const Config& cfg, const std::string& out_dir,
                    const std::vector<std::string>& extra_lines) {
  std::ofstream os(out_path(out_dir, "manifest.txt"));
  if (!os) throw std::runtime_error("manifest: cannot write under " + out_dir);
  os << "skigp-run v1\n";
  os << "library_version = " << SKIGP_VERSION_STRING << "\n";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(cfg.hash()));
  os << "config_hash = " << buf << "\n";
  for (const std::string& line : extra_lines) os << line << "\n";
  os << "--- config ---\n";
  os << cfg.canonical_text();
}

double pearson_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw std::invalid_argument("pearson_correlation: length mismatch");
  }
  const Eigen::VectorXd ac = a.array() - a.mean();
  const Eigen::VectorXd bc = b.array() - b.mean();
  const double denom = ac.norm() * bc.norm();
  if (denom == 0.0) return 0.0;
  return ac.dot(bc) / denom;
}

std::vector<MetricsRow> run_experiment(const std::string& name, const Config& cfg,
                                       const std::string& out_dir) {
  if (name == "reconstruct") return run_reconstruct(cfg, out_dir);
  if (name == "kernel-learn") return run_kernel_learning(cfg, out_dir);
  if (name == "infill") return run_infill(cfg, out_dir);
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

}  // namespace skigp::exper
