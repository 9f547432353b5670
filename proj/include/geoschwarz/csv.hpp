#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "geoschwarz/leapfrog.hpp"

namespace geoschwarz {

/// Column order of every convergence CSV.
inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns{
      "experiment_id", "method",          "manifold",
      "dims",          "m",               "distance",
      "seed",          "iter",            "residual_2",
      "residual_inf",  "piecewise_length", "error_to_reference",
      "inner_solver_calls", "wall_time_ms", "status"};
  return columns;
}

struct CsvRunInfo {
  std::string experiment_id;
  std::string method;
  std::string manifold;
  std::string dims;
  int m = 0;
  double distance = 0.0;
  unsigned long long seed = 0;
  bool record_timing = true;
};

/// Shortest round-trip decimal form.
std::string format_double(double value);

/// Header plus one row per record row; LF line endings, empty fields for
/// missing values. The run status is repeated on every row.
void write_record_csv(std::ostream& out, const CsvRunInfo& info,
                      const ConvergenceRecord& record);
void write_record_csv(const std::filesystem::path& path, const CsvRunInfo& info,
                      const ConvergenceRecord& record);

/// Minimal reader for files produced by write_record_csv (no quoting).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace geoschwarz
