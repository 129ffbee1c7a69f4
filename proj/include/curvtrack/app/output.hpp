#pragma once

// CSV and SVG emission. Files are written to a temporary sibling and renamed
// into place, so a failed run never leaves a partial file behind.

#include <string>
#include <vector>

#include "curvtrack/experiments.hpp"

namespace curvtrack::app {

/// First line of every CSV file.
inline constexpr const char* kCsvMagic = "# curvtrack v1";

/// 9 significant digits, locale independent, trailing zeros kept.
std::string format_value(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  /// Appends one row; the cell count must match the column count.
  void add_row(std::vector<std::string> cells);

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t size() const { return rows_.size(); }

  /// "# curvtrack v1", "# col,col,...", then one line per row, '\n' endings.
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Throws IoError when the file cannot be written or renamed.
void write_atomic(const std::string& path, const std::string& content);

/// Standalone SVG: one rect per cell (delta2/delta1 across, theta/pi up),
/// linear colour ramp, flagged cells outlined, min/max printed in the legend.
std::string render_heatmap(const MapResult& map, const std::string& title);

void emit_heatmap(const MapResult& map, const std::string& path, const std::string& title);

}  // namespace curvtrack::app
