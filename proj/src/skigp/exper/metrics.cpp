#include "skigp/exper/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace skigp::exper {

std::string format_metric(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void emit_metrics(const std::vector<MetricsRow>& rows, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("metrics: cannot open " + path + " for writing");
  os << "method,m,build_time_s,solve_time_s,mae,smae,logdet_err,notes\n";
  for (const MetricsRow& r : rows) {
    os << r.method << ',' << r.m << ',';
    const auto cell = [&os](double v) {
      if (!std::isnan(v)) os << format_metric(v);
      os << ',';
    };
    cell(r.build_time_s);
    cell(r.solve_time_s);
    cell(r.mae);
    cell(r.smae);
    cell(r.logdet_err);
    os << r.notes << '\n';
  }
}

}  // namespace skigp::exper
