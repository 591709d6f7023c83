#include "meanfield/csv.hpp"

#include <cstdio>
#include <fstream>

#include "meanfield/errors.hpp"

namespace meanfield::io {

std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw numeric_error("write_csv: cannot open " + path);
  out << table.header << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_g17(row[i]);
    }
    out << '\n';
  }
}

}  // namespace meanfield::io
