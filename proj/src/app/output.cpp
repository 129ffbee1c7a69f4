#include "curvtrack/app/output.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "curvtrack/errors.hpp"

namespace curvtrack::app {

namespace fs = std::filesystem;

std::string format_value(double v) { return fmt::format("{:#.9g}", v); }

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw InvalidArgument("CSV table needs at least one column");
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) throw InvalidArgument("CSV row width does not match header");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out = kCsvMagic;
  out += "\n# ";
  for (std::size_t k = 0; k < columns_.size(); ++k) {
    if (k) out += ',';
    out += columns_[k];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += row[k];
    }
    out += '\n';
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw IoError("cannot create directory for '" + path + "': " + ec.message());
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      throw IoError("short write to '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw IoError("cannot move output into '" + path + "': " + ec.message());
  }
}

namespace {

struct Rgb {
  double r, g, b;
};

// Dark blue through teal to yellow.
constexpr Rgb kRamp[] = {{0.267, 0.005, 0.329}, {0.128, 0.567, 0.551}, {0.993, 0.906, 0.144}};

std::string colour(double u) {
  u = std::clamp(u, 0.0, 1.0);
  const double x = u * 2.0;
  const int k = std::min(1, static_cast<int>(x));
  const double f = x - k;
  const Rgb& a = kRamp[k];
  const Rgb& b = kRamp[k + 1];
  auto channel = [&](double p, double q) { return static_cast<int>(std::lround(255.0 * (p + f * (q - p)))); };
  return fmt::format("#{:02x}{:02x}{:02x}", channel(a.r, b.r), channel(a.g, b.g), channel(a.b, b.b));
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_heatmap(const MapResult& map, const std::string& title) {
  const std::size_t rows = map.rows();
  const std::size_t cols = map.cols();
  if (rows == 0 || cols == 0 || map.values.size() != rows * cols) {
    throw InvalidArgument("heatmap needs a non-empty map");
  }
  double lo = map.values.front();
  double hi = lo;
  for (double v : map.values) {
    if (!std::isfinite(v)) throw InvalidArgument("heatmap values must be finite");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi - lo;

  constexpr double kPlotW = 600.0;
  constexpr double kPlotH = 400.0;
  constexpr double kLeft = 70.0;
  constexpr double kTop = 40.0;
  const double cw = kPlotW / static_cast<double>(rows);
  const double ch = kPlotH / static_cast<double>(cols);
  const double width = kLeft + kPlotW + 140.0;
  const double height = kTop + kPlotH + 60.0;

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      width, height, width, height);
  svg += fmt::format("<text x=\"{:.1f}\" y=\"22\" font-size=\"14\">{}</text>\n", kLeft, escape(title));
  svg += "<g shape-rendering=\"crispEdges\">\n";
  std::string outlines;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double u = span > 0.0 ? (map.value(i, j) - lo) / span : 0.5;
      const double x = kLeft + cw * static_cast<double>(i);
      const double y = kTop + kPlotH - ch * static_cast<double>(j + 1);
      svg += fmt::format("<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\" fill=\"{}\"/>\n",
                         x, y, cw, ch, colour(u));
      if (!map.flags.empty() && map.flagged(i, j)) {
        outlines += fmt::format(
            "<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\" fill=\"none\" "
            "stroke=\"#ff0000\" stroke-width=\"1.5\"/>\n",
            x, y, cw, ch);
      }
    }
  }
  svg += "</g>\n";
  svg += outlines;

  const auto& xs = map.grid.delta2_over_delta1;
  const auto& ys = map.grid.theta_over_pi;
  svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">delta2/delta1 [{} .. {}]</text>\n",
                     kLeft + 0.5 * kPlotW, kTop + kPlotH + 35.0, format_value(xs.front()),
                     format_value(xs.back()));
  svg += fmt::format(
      "<text x=\"20\" y=\"{:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {:.1f})\">"
      "theta/pi [{} .. {}]</text>\n",
      kTop + 0.5 * kPlotH, kTop + 0.5 * kPlotH, format_value(ys.front()), format_value(ys.back()));

  const double lx = kLeft + kPlotW + 30.0;
  constexpr int kSteps = 32;
  for (int k = 0; k < kSteps; ++k) {
    const double u = (k + 0.5) / kSteps;
    svg += fmt::format("<rect x=\"{:.1f}\" y=\"{:.3f}\" width=\"20\" height=\"{:.3f}\" fill=\"{}\"/>\n", lx,
                       kTop + kPlotH * (1.0 - static_cast<double>(k + 1) / kSteps), kPlotH / kSteps,
                       colour(u));
  }
  svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">max {}</text>\n", lx, kTop - 6.0, format_value(hi));
  svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">min {}</text>\n", lx, kTop + kPlotH + 16.0,
                     format_value(lo));
  svg += "</svg>\n";
  return svg;
}

void emit_heatmap(const MapResult& map, const std::string& path, const std::string& title) {
  write_atomic(path, render_heatmap(map, title));
}

}  // namespace curvtrack::app
