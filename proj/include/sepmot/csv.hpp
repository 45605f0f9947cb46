#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace sepmot {

using CsvCell = std::variant<double, long long, std::string>;

/// Formats a double with 17 significant digits and '.' decimal separator,
/// independent of locale.
std::string format_full(double v);

std::string csv_cell_to_string(const CsvCell& cell);

/// Writes a header row and data rows. Rows must match the header width.
void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
               const std::vector<std::vector<CsvCell>>& rows);

}  // namespace sepmot
