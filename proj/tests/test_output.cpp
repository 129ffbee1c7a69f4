#include <doctest.h>

#include <clocale>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "curvtrack/app/output.hpp"
#include "curvtrack/errors.hpp"

using namespace curvtrack;
using namespace curvtrack::app;
namespace fs = std::filesystem;

namespace {
std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

MapResult small_map(std::vector<double> values) {
  MapResult m{SweepGrid::make({-1, 1}, {0, 2}, ManifoldSpec::make(ManifoldKind::Torus, 1, 0, 1),
                              RampProtocol::make(0, 6.283185307179586, 1)),
              MapKind::OverlapGround, std::move(values), {0, 0, 0, 0}, {}};
  return m;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("curvtrack-test-" + name);
  fs::remove_all(p);
  return p;
}
}  // namespace

TEST_CASE("value formatting") {
  CHECK(format_value(1.0) == "1.00000000");
  CHECK(format_value(-2.375e-4) == "-0.000237500000");
  CHECK(format_value(1.0 / 3.0) == "0.333333333");
  CHECK(format_value(6.02e23) == "6.02000000e+23");
  CHECK(format_value(0.0) == "0.00000000");
}

TEST_CASE("value formatting ignores the C locale") {
  const char* prev = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = prev ? prev : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") != nullptr) CHECK(format_value(0.5) == "0.500000000");
  std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST_CASE("csv table") {
  CsvTable t({"a", "b"});
  t.add_row({"1", "2"});
  t.add_row({"3", "4"});
  CHECK(t.str() == "# curvtrack v1\n# a,b\n1,2\n3,4\n");
  CHECK_THROWS_AS(t.add_row({"1"}), InvalidArgument);
}

TEST_CASE("atomic write") {
  const fs::path dir = scratch("atomic");
  const fs::path target = dir / "nested" / "out.csv";
  write_atomic(target.string(), "hello\n");
  std::ifstream in(target);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == "hello\n");
  write_atomic(target.string(), "again\n");
  int files = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir)) files += e.is_regular_file();
  CHECK(files == 1);

  // a directory in the way: the write fails and leaves nothing behind
  const fs::path blocked = dir / "blocked";
  fs::create_directories(blocked);
  CHECK_THROWS_AS(write_atomic(blocked.string(), "x"), IoError);
  CHECK(!fs::exists(dir / "blocked.tmp"));
  fs::remove_all(dir);
}

TEST_CASE("heatmap of a 2x2 map") {
  const std::string svg = render_heatmap(small_map({0.1, 0.2, 0.3, 0.4}), "demo");
  CHECK(svg.starts_with("<?xml") + svg.starts_with("<svg") == 1);
  CHECK(count(svg, "<rect") - count(svg, "width=\"20\"") == 4);
  CHECK(count(svg, "max 0.400000000") == 1);
  CHECK(count(svg, "min 0.100000000") == 1);
  CHECK(count(svg, "stroke=\"#ff0000\"") == 0);

  auto flagged = small_map({0.1, 0.2, 0.3, 0.4});
  flagged.flags[2] = 1;
  CHECK(count(render_heatmap(flagged, "demo"), "stroke=\"#ff0000\"") == 1);
}

TEST_CASE("heatmap of a constant map") {
  const std::string svg = render_heatmap(small_map({0.7, 0.7, 0.7, 0.7}), "flat");
  CHECK(count(svg, "max 0.700000000") == 1);
  CHECK(count(svg, "min 0.700000000") == 1);
  CHECK(svg.find("nan") == std::string::npos);
  CHECK_THROWS_AS(render_heatmap(small_map({0.1, NAN, 0.3, 0.4}), "bad"), InvalidArgument);

  const fs::path dir = scratch("svg");
  emit_heatmap(small_map({0.1, 0.2, 0.3, 0.4}), (dir / "m.svg").string(), "demo");
  CHECK(fs::exists(dir / "m.svg"));
  fs::remove_all(dir);
}
