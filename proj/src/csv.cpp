#include "sepmot/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "sepmot/errors.hpp"

namespace sepmot {

std::string format_full(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // snprintf honours the global C locale, which the tools never change.
  return buf;
}

std::string csv_cell_to_string(const CsvCell& cell) {
  if (std::holds_alternative<double>(cell)) return format_full(std::get<double>(cell));
  if (std::holds_alternative<long long>(cell)) return std::to_string(std::get<long long>(cell));
  return std::get<std::string>(cell);
}

void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
               const std::vector<std::vector<CsvCell>>& rows) {
  std::ofstream out(file);
  if (!out) throw InputError("write_csv: cannot open " + file.string());
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw InputError("write_csv: row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << csv_cell_to_string(row[i]);
    }
    out << '\n';
  }
}

}  // namespace sepmot
