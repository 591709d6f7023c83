#pragma once

#include <string>
#include <vector>

namespace meanfield::io {

/// Locale-independent formatting: '.' decimal separator, 17 significant
/// digits, round-trip safe.
std::string format_g17(double value);

struct CsvTable {
  std::string header;                     // comma-separated column names
  std::vector<std::vector<double>> rows;  // one vector per row
};

void write_csv(const std::string& path, const CsvTable& table);

}  // namespace meanfield::io
