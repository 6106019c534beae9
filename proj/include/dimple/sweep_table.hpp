#ifndef DIMPLE_SWEEP_TABLE_HPP
#define DIMPLE_SWEEP_TABLE_HPP

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace dimple {

// Generic (parameter grid -> observables) table.  Cells are preformatted
// strings so that CSV output is deterministic and locale-free.
struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  static std::string num(double v, int digits = 12) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
  }

  void add_meta(const std::string& key, const std::string& value) {
    metadata.emplace_back(key, value);
  }

  std::vector<std::string>& add_row() {
    rows.emplace_back();
    return rows.back();
  }

  void write_csv(std::ostream& os, bool with_metadata = true) const {
    if (with_metadata)
      for (const auto& [k, v] : metadata) os << "# " << k << " = " << v << "\n";
    for (size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
      for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << "\n";
    }
  }
};

}  // namespace dimple

#endif  // DIMPLE_SWEEP_TABLE_HPP
