#include "geoschwarz/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace geoschwarz {

namespace {

// Commas and line breaks would break the unquoted layout.
std::string sanitize(std::string field) {
  for (char& c : field) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return field;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, end);
}

void write_record_csv(std::ostream& out, const CsvRunInfo& info,
                      const ConvergenceRecord& record) {
  const auto& columns = csv_columns();
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << (i ? "," : "") << columns[i];
  out << '\n';
  const std::string status = sanitize(record.status);
  for (const auto& row : record.rows) {
    out << sanitize(info.experiment_id) << ',' << info.method << ','
        << info.manifold << ',' << info.dims << ',' << info.m << ','
        << format_double(info.distance) << ',' << info.seed << ',' << row.iter
        << ',' << format_double(row.residual_2) << ','
        << format_double(row.residual_inf) << ',';
    if (row.piecewise_length) out << format_double(*row.piecewise_length);
    out << ',';
    if (row.error_to_reference) out << format_double(*row.error_to_reference);
    out << ',';
    if (row.inner_solver_calls) out << *row.inner_solver_calls;
    out << ',';
    if (info.record_timing) out << format_double(row.wall_time_ms);
    out << ',' << status << '\n';
  }
}

void write_record_csv(const std::filesystem::path& path, const CsvRunInfo& info,
                      const ConvergenceRecord& record) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_record_csv(out, info, record);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  auto split = [](const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
  };
  CsvTable table;
  std::string line;
  if (std::getline(in, line)) table.header = split(line);
  while (std::getline(in, line))
    if (!line.empty()) table.rows.push_back(split(line));
  return table;
}

}  // namespace geoschwarz
