#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace vipass {

/// Simulation output: one row per control step. `columns` are the CSV
/// contract; `extra_columns` carry diagnostics (tank level, remaining
/// initial energy) that stay in memory only.
struct TraceTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> extra_columns;
  std::vector<std::vector<double>> extra_rows;

  bool has_column(std::string_view name) const;
  /// Values of a CSV or extra column. Throws std::out_of_range naming the
  /// column when it does not exist.
  std::vector<double> column(std::string_view name) const;
  std::size_t column_index(std::string_view name) const;
};

/// CSV header for a trace with `n_attractors` attractor blocks.
std::vector<std::string> trace_columns(std::size_t n_attractors);

/// Writes the header and every `decimate`-th row (always starting with the
/// first). Numbers use the shortest representation that parses back to the
/// same double. Throws std::runtime_error naming the path on I/O failure.
void write_trace(const TraceTable& trace, const std::filesystem::path& path, std::size_t decimate = 1);
void write_trace(const TraceTable& trace, std::ostream& out, std::size_t decimate = 1);

/// Parses a CSV written by write_trace. Throws std::runtime_error on I/O or
/// format errors.
TraceTable read_trace(const std::filesystem::path& path);
TraceTable read_trace(std::istream& in);

struct ViolationMetrics {
  double pct_steps = 0.0;     // percent of steps with Vdot > Vdot_inp + threshold
  double total_energy = 0.0;  // J, sum of (Vdot - Vdot_inp) dt over those steps
  std::size_t violating_steps = 0;
  std::size_t steps = 0;
};

/// Evaluates the ledger columns of a trace. The first row carries no
/// interval and is skipped; each later row covers the time since the
/// previous row.
ViolationMetrics violation_metrics(const TraceTable& trace, double threshold);

}  // namespace vipass
