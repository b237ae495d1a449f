#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpm/diagnostics.hpp"
#include "fpm/fields.hpp"
#include "fpm/verify.hpp"

namespace fpm {

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << std::setprecision(17);
  return out;
}

}  // namespace detail

inline std::vector<std::string> timeseries_columns(std::span<const double> s_list) {
  std::vector<std::string> cols{"t", "mass", "min_rho", "max_rho", "l2"};
  for (double s : s_list) {
    cols.push_back("hs_" + format_number(s));
    cols.push_back("hsdot_" + format_number(s));
  }
  for (const char* c : {"B1", "B2", "int_B1", "int_B2sq", "energy_residual_L2", "energy_residual_Hs"}) cols.push_back(c);
  return cols;
}

inline std::vector<double> timeseries_row(const DiagnosticsRecord& r) {
  std::vector<double> v{r.t, r.mass, r.min_rho, r.max_rho, r.l2};
  for (const SobolevEntry& e : r.hs) {
    v.push_back(e.inhomogeneous);
    v.push_back(e.homogeneous);
  }
  for (double x : {r.B1, r.B2, r.int_B1, r.int_B2sq, r.energy_residual_L2, r.energy_residual_Hs}) v.push_back(x);
  return v;
}

/// CSV time series, one row per diagnostics sample.
class TimeSeriesWriter {
 public:
  TimeSeriesWriter(const std::filesystem::path& path, std::span<const double> s_list)
      : out_(detail::open_output(path)), width_(timeseries_columns(s_list).size()) {
    write_line(timeseries_columns(s_list));
  }

  void write(const DiagnosticsRecord& r) {
    const std::vector<double> row = timeseries_row(r);
    if (row.size() != width_) throw std::invalid_argument("TimeSeriesWriter: record does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i) out_ << (i ? "," : "") << row[i];
    out_ << '\n';
  }

 private:
  void write_line(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
    out_ << '\n';
  }

  std::ofstream out_;
  std::size_t width_;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw std::out_of_range("no column '" + name + "'");
  }
};

inline Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  Table t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
  };
  if (!std::getline(in, line)) return t;
  t.columns = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const std::string& c : split(line)) row.push_back(std::stod(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Plain CSV with a header row.
inline void write_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows) {
  std::ofstream out = detail::open_output(path);
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

/// Header line "d N t", then the N^d grid values in row-major order.
inline void write_snapshot(const std::filesystem::path& path, const RealField& f, double t) {
  std::ofstream out = detail::open_output(path);
  out << f.grid.dim() << ' ' << f.grid.n() << ' ' << t << '\n';
  for (double v : f.values) out << v << '\n';
}

struct Snapshot {
  RealField field;
  double t = 0.0;
};

inline Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  int d = 0, n = 0;
  double t = 0.0;
  if (!(in >> d >> n >> t)) throw std::runtime_error("malformed snapshot header in '" + path.string() + "'");
  Snapshot s{RealField(TorusGrid(d, n)), t};
  for (double& v : s.field.values)
    if (!(in >> v)) throw std::runtime_error("truncated snapshot '" + path.string() + "'");
  return s;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out = detail::open_output(path);
  out << text;
}

}  // namespace fpm
