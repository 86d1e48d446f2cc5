#include "vipass/trace.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace vipass {

bool TraceTable::has_column(std::string_view name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end() ||
         std::find(extra_columns.begin(), extra_columns.end(), name) != extra_columns.end();
}

std::size_t TraceTable::column_index(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("trace has no column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> TraceTable::column(std::string_view name) const {
  std::vector<double> out;
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it != columns.end()) {
    const auto idx = static_cast<std::size_t>(it - columns.begin());
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[idx]);
    return out;
  }
  it = std::find(extra_columns.begin(), extra_columns.end(), name);
  if (it != extra_columns.end()) {
    const auto idx = static_cast<std::size_t>(it - extra_columns.begin());
    out.reserve(extra_rows.size());
    for (const auto& r : extra_rows) out.push_back(r[idx]);
    return out;
  }
  throw std::out_of_range("trace has no column '" + std::string(name) + "'");
}

std::vector<std::string> trace_columns(std::size_t n_attractors) {
  std::vector<std::string> c{"time_s"};
  for (std::size_t i = 0; i < n_attractors; ++i) {
    const std::string p = "a" + std::to_string(i) + "_";
    for (int k = 0; k < 6; ++k) c.push_back(p + "dx" + std::to_string(k));
    c.push_back(p + "d");
    c.push_back(p + "d_curl");
    for (int k = 0; k < 6; ++k) c.push_back(p + "K" + std::to_string(k));
    c.push_back(p + "V_pot_J");
    c.push_back(p + "P_d_W");
  }
  for (const char* n : {"x", "y", "z", "qw", "qx", "qy", "qz", "vx", "vy", "vz", "wx", "wy", "wz", "V_kin_J",
                        "V_inp_J", "V_total_J", "Vdot_W", "Vdot_inp_W", "violation_flag"}) {
    c.emplace_back(n);
  }
  return c;
}

void write_trace(const TraceTable& trace, std::ostream& out, std::size_t decimate) {
  if (decimate == 0) throw std::invalid_argument("write_trace: decimation must be at least 1");
  for (std::size_t i = 0; i < trace.columns.size(); ++i) {
    if (i) out << ',';
    out << trace.columns[i];
  }
  out << '\n';
  char buf[64];
  for (std::size_t r = 0; r < trace.rows.size(); r += decimate) {
    const auto& row = trace.rows[r];
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      const auto res = std::to_chars(buf, buf + sizeof(buf), row[i]);
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

void write_trace(const TraceTable& trace, const std::filesystem::path& path, std::size_t decimate) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_trace(trace, out, decimate);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

TraceTable read_trace(std::istream& in) {
  TraceTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace: missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  for (auto f : split(line)) t.columns.emplace_back(f);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != t.columns.size()) {
      throw std::runtime_error("trace: line " + std::to_string(lineno) + " has " + std::to_string(fields.size()) +
                               " fields, expected " + std::to_string(t.columns.size()));
    }
    std::vector<double> row(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto f = fields[i];
      const auto res = std::from_chars(f.data(), f.data() + f.size(), row[i]);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        throw std::runtime_error("trace: bad number '" + std::string(f) + "' on line " + std::to_string(lineno));
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

TraceTable read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trace '" + path.string() + "'");
  return read_trace(in);
}

ViolationMetrics violation_metrics(const TraceTable& trace, double threshold) {
  const auto ti = trace.column_index("time_s");
  const auto vi = trace.column_index("Vdot_W");
  const auto ii = trace.column_index("Vdot_inp_W");
  ViolationMetrics m;
  for (std::size_t r = 1; r < trace.rows.size(); ++r) {
    const auto& row = trace.rows[r];
    const double dt = row[ti] - trace.rows[r - 1][ti];
    ++m.steps;
    if (row[vi] > row[ii] + threshold) {
      ++m.violating_steps;
      m.total_energy += std::max(0.0, row[vi] - row[ii]) * dt;
    }
  }
  if (m.steps > 0) m.pct_steps = 100.0 * static_cast<double>(m.violating_steps) / static_cast<double>(m.steps);
  return m;
}

}  // namespace vipass
