#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "matspec/fourier.hpp"
#include "matspec/summaries.hpp"

namespace matspec {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

namespace detail {

inline bool is_number(const std::string& s) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    (void)std::stod(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size();
}

}  // namespace detail

// Strict comma-separated parser: no quoting, every row must have the same
// number of fields as the first row. A first row that is not all-numeric is
// taken as a header. Errors report 1-based row and column.
inline CsvTable read_csv(std::istream& in, const std::string& name = "<csv>") {
  CsvTable table;
  std::string line;
  std::size_t row = 0, width = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (row == 1) {
      width = fields.size();
      bool numeric = true;
      for (const auto& f : fields) numeric = numeric && detail::is_number(f);
      if (numeric)
        table.rows.push_back(std::move(fields));
      else
        table.header = std::move(fields);
    } else {
      if (fields.size() != width)
        throw std::runtime_error(name + ": row " + std::to_string(row) + " has " +
                                 std::to_string(fields.size()) + " fields, expected " +
                                 std::to_string(width));
      table.rows.push_back(std::move(fields));
    }
  }
  if (width == 0) throw std::runtime_error(name + ": empty file");
  return table;
}

inline CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_csv(in, path);
}

inline double parse_field(const CsvTable& t, std::size_t row, std::size_t col, const std::string& name) {
  const std::string& s = t.rows[row][col];
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty())
    throw std::runtime_error(name + ": row " + std::to_string(row + (t.header.empty() ? 1 : 2)) +
                             ", column " +
                             std::to_string(col + 1) + ": not a number: '" + s + "'");
  return v;
}

inline void write_csv(std::ostream& out, const CsvTable& table) {
  auto write_row = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
    out << "\n";
  };
  if (!table.header.empty()) write_row(table.header);
  for (const auto& r : table.rows) write_row(r);
}

// Time series as CSV: one row per time point; optional header z1,...,zd.
inline void write_series_csv(std::ostream& out, const TimeSeries& ts, bool header = false) {
  CsvTable t;
  if (header)
    for (int j = 0; j < ts.d(); ++j) t.header.push_back("z" + std::to_string(j + 1));
  for (int i = 0; i < ts.n(); ++i) {
    std::vector<std::string> row;
    for (int j = 0; j < ts.d(); ++j) row.push_back(format_double(ts.values(i, j)));
    t.rows.push_back(std::move(row));
  }
  write_csv(out, t);
}

inline TimeSeries read_series_csv(const std::string& path) {
  const CsvTable t = read_csv_file(path);
  if (t.rows.empty()) throw std::runtime_error(path + ": no data rows");
  const std::size_t width = t.rows.front().size();
  TimeSeries ts;
  ts.values.resize(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j)
      ts.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_field(t, i, j, path);
  return ts;
}

// Summary CSV: one row per (frequency, scalar component).
inline void write_summary_csv(std::ostream& out, const SpectralSummary& s) {
  CsvTable t;
  t.header = {"omega", "component_id", "re_or_im", "median", "q05", "q95", "uniform_lo", "uniform_hi"};
  for (std::size_t g = 0; g < s.grid.size(); ++g)
    for (std::size_t c = 0; c < s.components.size(); ++c) {
      const auto& comp = s.components[c];
      const int gi = static_cast<int>(g), ci = static_cast<int>(c);
      t.rows.push_back({format_double(s.grid[g]), comp.label(), comp.imag ? "im" : "re",
                        format_double(s.median(ci, gi)), format_double(s.q05(ci, gi)),
                        format_double(s.q95(ci, gi)), format_double(s.uniform_lo(ci, gi)),
                        format_double(s.uniform_hi(ci, gi))});
    }
  write_csv(out, t);
}

inline SpectralSummary read_summary_csv(const std::string& path) {
  const CsvTable t = read_csv_file(path);
  if (t.header != std::vector<std::string>{"omega", "component_id", "re_or_im", "median", "q05", "q95",
                                           "uniform_lo", "uniform_hi"})
    throw std::runtime_error(path + ": unexpected summary header");
  SpectralSummary s;
  int d = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double w = parse_field(t, i, 0, path);
    if (s.grid.empty() || w != s.grid.back()) s.grid.push_back(w);
    const std::string& id = t.rows[i][1];
    if (id.size() != 3 || id[0] != 'f') throw std::runtime_error(path + ": bad component id '" + id + "'");
    d = std::max(d, id[2] - '0');
  }
  s.components = spectral_components(d);
  const int n_grid = static_cast<int>(s.grid.size());
  const int n_comp = static_cast<int>(s.components.size());
  if (static_cast<int>(t.rows.size()) != n_grid * n_comp)
    throw std::runtime_error(path + ": row count does not match grid x components");
  for (RealMatrix* m : {&s.median, &s.q05, &s.q95, &s.uniform_lo, &s.uniform_hi}) m->resize(n_comp, n_grid);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const int g = static_cast<int>(i) / n_comp;
    const ComponentId want{t.rows[i][1][1] - '1', t.rows[i][1][2] - '1', t.rows[i][2] == "im"};
    int c = -1;
    for (int cc = 0; cc < n_comp; ++cc)
      if (s.components[cc].i == want.i && s.components[cc].j == want.j && s.components[cc].imag == want.imag)
        c = cc;
    if (c < 0) throw std::runtime_error(path + ": row " + std::to_string(i + 2) + ": unknown component");
    s.median(c, g) = parse_field(t, i, 3, path);
    s.q05(c, g) = parse_field(t, i, 4, path);
    s.q95(c, g) = parse_field(t, i, 5, path);
    s.uniform_lo(c, g) = parse_field(t, i, 6, path);
    s.uniform_hi(c, g) = parse_field(t, i, 7, path);
  }
  return s;
}

// Rebuild the median spectrum matrices from a summary.
inline std::vector<Matrix> summary_median_spectrum(const SpectralSummary& s) {
  int d = 0;
  for (const auto& c : s.components) d = std::max(d, c.j + 1);
  std::vector<Matrix> out(s.grid.size(), Matrix::Zero(d, d));
  for (std::size_t g = 0; g < s.grid.size(); ++g)
    for (std::size_t c = 0; c < s.components.size(); ++c) {
      const auto& comp = s.components[c];
      const double v = s.median(static_cast<int>(c), static_cast<int>(g));
      Complex& lo = out[g](comp.j, comp.i);
      Complex& hi = out[g](comp.i, comp.j);
      if (comp.imag) {
        hi += Complex(0.0, v);
        lo -= Complex(0.0, v);
      } else {
        hi += v;
        if (comp.i != comp.j) lo += v;
      }
    }
  return out;
}

}  // namespace matspec
