#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace skigp::exper {

struct MetricsRow {
  std::string method;
  std::int64_t m = 0;
  double build_time_s = std::numeric_limits<double>::quiet_NaN();
  double solve_time_s = std::numeric_limits<double>::quiet_NaN();
  double mae = std::numeric_limits<double>::quiet_NaN();
  double smae = std::numeric_limits<double>::quiet_NaN();
  double logdet_err = std::numeric_limits<double>::quiet_NaN();
  std::string notes;
};

/// 12 significant digits; parsing the output and re-printing it is stable.
std::string format_metric(double v);

/// Fixed column order: method,m,build_time_s,solve_time_s,mae,smae,logdet_err,notes.
/// NaN fields become empty cells. Empty input yields a header-only file.
void emit_metrics(const std::vector<MetricsRow>& rows, const std::string& path);

/// Monotonic stopwatch for the build/solve phase timings.
class StopWatch {
 public:
  StopWatch() : start_(std::chrono::steady_clock::now()) {}
  void restart() { start_ = std::chrono::steady_clock::now(); }
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace skigp::exper
