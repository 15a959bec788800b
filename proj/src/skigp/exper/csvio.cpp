#include "skigp/exper/csvio.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace skigp::exper {

namespace {

double parse_cell(const std::string& cell, int row, int col) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  while (end != nullptr && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
  if (end == begin || (end != nullptr && *end != '\0')) {
    throw std::invalid_argument("csv: non-numeric cell at row " + std::to_string(row) +
                                ", column " + std::to_string(col));
  }
  return v;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream is(line);
  while (std::getline(is, tok, ',')) out.push_back(tok);
  return out;
}

}  // namespace

Dataset ingest_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("csv: cannot open " + path);
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("csv: empty file " + path);

  std::vector<double> t_train, y_train, t_test, y_test;
  int row = 1;  // header was row 1
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_commas(line);
    if (cells.size() < 2) {
      throw std::invalid_argument("csv: row " + std::to_string(row) + " needs 2 columns");
    }
    const double t = parse_cell(cells[0], row, 1);
    // "nan" in the target column marks a held-out (to be infilled) point.
    const std::string& ycell = cells[1];
    double y = 0.0;
    bool missing = false;
    {
      const char* begin = ycell.c_str();
      char* end = nullptr;
      y = std::strtod(begin, &end);
      while (end != nullptr && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
      if (end == begin || (end != nullptr && *end != '\0')) {
        throw std::invalid_argument("csv: non-numeric cell at row " + std::to_string(row) +
                                    ", column 2");
      }
      missing = std::isnan(y);
    }
    if (missing) {
      t_test.push_back(t);
      y_test.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      t_train.push_back(t);
      y_train.push_back(y);
    }
  }
  if (t_train.empty()) throw std::invalid_argument("csv: no training rows in " + path);

  Dataset out;
  out.x.resize(static_cast<Eigen::Index>(t_train.size()), 1);
  out.y.resize(static_cast<Eigen::Index>(t_train.size()));
  for (std::size_t i = 0; i < t_train.size(); ++i) {
    out.x(static_cast<Eigen::Index>(i), 0) = t_train[i];
    out.y(static_cast<Eigen::Index>(i)) = y_train[i];
  }
  out.x_test.resize(static_cast<Eigen::Index>(t_test.size()), 1);
  out.y_test.resize(static_cast<Eigen::Index>(t_test.size()));
  for (std::size_t i = 0; i < t_test.size(); ++i) {
    out.x_test(static_cast<Eigen::Index>(i), 0) = t_test[i];
    out.y_test(static_cast<Eigen::Index>(i)) = y_test[i];
  }
  return out;
}

void export_dataset(const Dataset& data, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("csv: cannot open " + path + " for writing");
  os << "t,y\n";
  char buf[64];
  const auto put = [&](double t, double y) {
    std::snprintf(buf, sizeof(buf), "%.17g", t);
    os << buf << ',';
    if (std::isnan(y)) {
      os << "nan";
    } else {
      std::snprintf(buf, sizeof(buf), "%.17g", y);
      os << buf;
    }
    os << '\n';
  };
  for (Eigen::Index i = 0; i < data.x.rows(); ++i) put(data.x(i, 0), data.y(i));
  for (Eigen::Index i = 0; i < data.x_test.rows(); ++i) {
    put(data.x_test(i, 0), std::numeric_limits<double>::quiet_NaN());
  }
}

}  // namespace skigp::exper
