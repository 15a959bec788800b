#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "skigp/exper/config.hpp"

namespace skigp::exper {

/// Writes out_dir/manifest.txt: library version, config hash, the resolved
/// config, and any extra lines (model manifest paths etc).
void write_manifest(const Config& cfg, const std::string& out_dir,
                    const std::vector<std::string>& extra_lines);

/// Creates out_dir (single level) if needed; returns out_dir + "/" + name.
std::string out_path(const std::string& out_dir, const std::string& name);

double pearson_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace skigp::exper
