#include "curvtrack/app/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <vector>

#include "curvtrack/errors.hpp"

namespace curvtrack::app {

using std::numbers::pi;

namespace {

template <class Enum>
struct Names {
  Enum value;
  std::string_view name;
};

constexpr Names<Command> kCommands[] = {
    {Command::Curvature, "curvature"}, {Command::Chern, "chern"},
    {Command::Evolve, "evolve"},       {Command::Map, "map"},
    {Command::Singularities, "singularities"}, {Command::Validate, "validate"}};
constexpr Names<ThetaSpan> kSpans[] = {{ThetaSpan::Pi, "pi"}, {ThetaSpan::TwoPi, "2pi"}};
constexpr Names<MapSelect> kMaps[] = {{MapSelect::Curvature, "curvature"},
                                      {MapSelect::OverlapGround, "overlap_ground"},
                                      {MapSelect::OverlapExcited, "overlap_excited"},
                                      {MapSelect::Fidelity, "fidelity"}};
constexpr Names<OutputFormat> kFormats[] = {{OutputFormat::Csv, "csv"}, {OutputFormat::Svg, "svg"}};
constexpr Names<Preparation> kPreparations[] = {{Preparation::EigenGround, "eigen_ground"},
                                                {Preparation::BareGround, "bare_ground"}};
constexpr Names<ManifoldKind> kKinds[] = {{ManifoldKind::Sphere, "sphere"},
                                          {ManifoldKind::Torus, "torus"}};

template <class Enum, std::size_t N>
std::string_view name_of(const Names<Enum> (&table)[N], Enum v) {
  for (const auto& e : table) {
    if (e.value == v) return e.name;
  }
  return "unknown";
}

template <class Enum, std::size_t N>
std::optional<Enum> lookup(const Names<Enum> (&table)[N], std::string_view name) {
  for (const auto& e : table) {
    if (e.name == name) return e.value;
  }
  return std::nullopt;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

double to_double(std::string_view text, int line, std::string_view key) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, fmt::format("'{}' expects a number, got '{}'", key, text));
  }
  return v;
}

int to_int(std::string_view text, int line, std::string_view key) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, fmt::format("'{}' expects an integer, got '{}'", key, text));
  }
  return v;
}

bool to_bool(std::string_view text, int line, std::string_view key) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ParseError(line, fmt::format("'{}' expects true or false, got '{}'", key, text));
}

template <class Enum, std::size_t N>
Enum to_enum(const Names<Enum> (&table)[N], std::string_view text, int line, std::string_view key) {
  if (auto v = lookup(table, text)) return *v;
  std::string allowed;
  for (const auto& e : table) allowed += (allowed.empty() ? "" : "|") + std::string(e.name);
  throw ParseError(line, fmt::format("'{}' expects {}, got '{}'", key, allowed, text));
}

OffsetRange& sweep_of(RunConfig& cfg) {
  if (!cfg.sweep) cfg.sweep = OffsetRange{};
  return *cfg.sweep;
}

using Setter = std::function<void(RunConfig&, std::string_view, int)>;

struct Key {
  std::string_view name;
  Setter set;
};

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"command",
       [](RunConfig& c, std::string_view v, int l) { c.command = to_enum(kCommands, v, l, "command"); }},
      {"manifold.kind",
       [](RunConfig& c, std::string_view v, int l) { c.kind = to_enum(kKinds, v, l, "manifold.kind"); }},
      {"manifold.delta1_over_2pi_mhz",
       [](RunConfig& c, std::string_view v, int l) {
         c.delta1_over_2pi_mhz = to_double(v, l, "manifold.delta1_over_2pi_mhz");
       }},
      {"manifold.omega1_over_2pi_mhz",
       [](RunConfig& c, std::string_view v, int l) {
         c.omega1_over_2pi_mhz = to_double(v, l, "manifold.omega1_over_2pi_mhz");
       }},
      {"manifold.delta2_over_delta1",
       [](RunConfig& c, std::string_view v, int l) {
         c.delta2_over_delta1 = to_double(v, l, "manifold.delta2_over_delta1");
       }},
      {"protocol.tau_us",
       [](RunConfig& c, std::string_view v, int l) { c.tau_us = to_double(v, l, "protocol.tau_us"); }},
      {"protocol.theta_span",
       [](RunConfig& c, std::string_view v, int l) {
         c.theta_span = to_enum(kSpans, v, l, "protocol.theta_span");
       }},
      {"protocol.phi",
       [](RunConfig& c, std::string_view v, int l) { c.phi = to_double(v, l, "protocol.phi"); }},
      {"protocol.initial_state",
       [](RunConfig& c, std::string_view v, int l) {
         c.initial_state = to_enum(kPreparations, v, l, "protocol.initial_state");
       }},
      {"noise.t1_us",
       [](RunConfig& c, std::string_view v, int l) { c.t1_us = to_double(v, l, "noise.t1_us"); }},
      {"noise.t2_star_us",
       [](RunConfig& c, std::string_view v, int l) { c.t2_star_us = to_double(v, l, "noise.t2_star_us"); }},
      {"noise.literal_sigma_minus",
       [](RunConfig& c, std::string_view v, int l) {
         c.literal_sigma_minus = to_bool(v, l, "noise.literal_sigma_minus");
       }},
      {"numerics.dt_us",
       [](RunConfig& c, std::string_view v, int l) { c.dt_us = to_double(v, l, "numerics.dt_us"); }},
      {"sweep.delta2_over_delta1_min",
       [](RunConfig& c, std::string_view v, int l) {
         sweep_of(c).lo = to_double(v, l, "sweep.delta2_over_delta1_min");
       }},
      {"sweep.delta2_over_delta1_max",
       [](RunConfig& c, std::string_view v, int l) {
         sweep_of(c).hi = to_double(v, l, "sweep.delta2_over_delta1_max");
       }},
      {"sweep.points",
       [](RunConfig& c, std::string_view v, int l) { sweep_of(c).n = to_int(v, l, "sweep.points"); }},
      {"grid.n_theta",
       [](RunConfig& c, std::string_view v, int l) { c.n_theta = to_int(v, l, "grid.n_theta"); }},
      {"map.kind",
       [](RunConfig& c, std::string_view v, int l) { c.map_kind = to_enum(kMaps, v, l, "map.kind"); }},
      {"singularities.threshold",
       [](RunConfig& c, std::string_view v, int l) {
         c.singularity_threshold = to_double(v, l, "singularities.threshold");
       }},
      {"output.path", [](RunConfig& c, std::string_view v, int) { c.output_path = std::string(v); }},
      {"output.format",
       [](RunConfig& c, std::string_view v, int l) { c.format = to_enum(kFormats, v, l, "output.format"); }},
  };
  return table;
}

void require(bool ok, const char* field, const std::string& msg) {
  if (!ok) throw ValidationError(field, msg);
}

}  // namespace

std::string_view to_string(Command c) { return name_of(kCommands, c); }
std::string_view to_string(ThetaSpan s) { return name_of(kSpans, s); }
std::string_view to_string(MapSelect m) { return name_of(kMaps, m); }
std::string_view to_string(OutputFormat f) { return name_of(kFormats, f); }
std::string_view to_string(Preparation p) { return name_of(kPreparations, p); }

Command parse_command(std::string_view name) {
  if (auto c = lookup(kCommands, name)) return *c;
  throw ValidationError("command", fmt::format("unknown command '{}'", name));
}

ManifoldSpec RunConfig::spec() const { return spec_at(delta2_over_delta1); }

ManifoldSpec RunConfig::spec_at(double d2_over_d1) const {
  const double d1 = 2.0 * pi * delta1_over_2pi_mhz;
  return ManifoldSpec::make(kind, d1, d2_over_d1 * d1, 2.0 * pi * omega1_over_2pi_mhz);
}

RampProtocol RunConfig::protocol() const {
  double span = kind == ManifoldKind::Sphere ? pi : 2.0 * pi;
  if (theta_span) span = *theta_span == ThetaSpan::Pi ? pi : 2.0 * pi;
  return RampProtocol::make(0.0, span, tau_us, phi);
}

std::optional<NoiseSpec> RunConfig::noise() const {
  if (!t1_us) return std::nullopt;
  return NoiseSpec::make(*t1_us, *t2_star_us, literal_sigma_minus);
}

Preparation RunConfig::preparation() const {
  if (initial_state) return *initial_state;
  const bool experiment = command == Command::Map || (command == Command::Chern && sweep);
  return experiment ? Preparation::BareGround : Preparation::EigenGround;
}

std::string RunConfig::resolved_output_path() const {
  if (!output_path.empty()) return output_path;
  const std::string_view cmd = command ? to_string(*command) : std::string_view("output");
  return fmt::format("{}.{}", cmd, to_string(format));
}

void validate(const RunConfig& c) {
  const bool validate_only = c.command == Command::Validate;
  if (!validate_only) {
    require(std::isfinite(c.delta1_over_2pi_mhz) && c.delta1_over_2pi_mhz > 0.0,
            "manifold.delta1_over_2pi_mhz", "must be a positive number");
    require(std::isfinite(c.omega1_over_2pi_mhz) && c.omega1_over_2pi_mhz > 0.0,
            "manifold.omega1_over_2pi_mhz", "must be a positive number");
    require(std::isfinite(c.tau_us) && c.tau_us > 0.0, "protocol.tau_us",
            "required, must be a positive duration");
  }
  require(std::isfinite(c.delta2_over_delta1), "manifold.delta2_over_delta1", "must be finite");
  require(std::isfinite(c.phi), "protocol.phi", "must be finite");
  const bool needs_phi_zero = c.command == Command::Curvature || c.command == Command::Chern ||
                              c.command == Command::Map;
  require(!needs_phi_zero || c.phi == 0.0, "protocol.phi",
          "curvature extraction runs at phi = 0 only");

  require(c.t1_us.has_value() == c.t2_star_us.has_value(),
          c.t1_us ? "noise.t2_star_us" : "noise.t1_us", "noise needs both t1_us and t2_star_us");
  if (c.t1_us) {
    require(std::isfinite(*c.t1_us) && *c.t1_us > 0.0, "noise.t1_us", "must be positive");
    require(std::isfinite(*c.t2_star_us) && *c.t2_star_us > 0.0, "noise.t2_star_us",
            "must be positive");
    require(*c.t2_star_us <= 2.0 * *c.t1_us, "noise.t2_star_us", "must not exceed 2 * t1_us");
  }
  if (c.dt_us) {
    require(std::isfinite(*c.dt_us) && *c.dt_us > 0.0, "numerics.dt_us", "must be positive");
  }
  if (c.sweep) {
    require(std::isfinite(c.sweep->lo), "sweep.delta2_over_delta1_min", "must be finite");
    require(std::isfinite(c.sweep->hi) && c.sweep->hi > c.sweep->lo, "sweep.delta2_over_delta1_max",
            "must exceed the minimum");
    require(c.sweep->n >= 3, "sweep.points", "must be at least 3");
  }
  require(!(c.command == Command::Map || c.command == Command::Singularities) ||
              c.kind == ManifoldKind::Torus,
          "manifold.kind", "maps are defined over the torus family");
  require(c.n_theta >= 2, "grid.n_theta", "must be at least 2");
  require(c.singularity_threshold > 0.0, "singularities.threshold", "must be positive");
  require(c.format == OutputFormat::Csv || !c.command || c.command == Command::Map ||
              c.command == Command::Singularities,
          "output.format", "svg output is available for map and singularities only");
  require(c.output_path.find_first_of("\n\r#") == std::string::npos, "output.path",
          "must not contain newlines or '#'");
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw ParseError(line_no, "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string_view raw_key = trim(line.substr(0, eq));
    const std::string_view value = unquote(trim(line.substr(eq + 1)));
    if (raw_key.empty()) throw ParseError(line_no, "missing key");
    const std::string key = section.empty() ? std::string(raw_key) : section + "." + std::string(raw_key);

    const auto& table = keys();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Key& k) { return k.name == key; });
    if (it == table.end()) throw ParseError(line_no, fmt::format("unknown key '{}'", key));
    if (!seen.insert(key).second) throw ParseError(line_no, fmt::format("repeated key '{}'", key));
    if (value.empty() && key != "output.path") {
      throw ParseError(line_no, fmt::format("'{}' has no value", key));
    }
    it->set(cfg, value, line_no);
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string render_config(const RunConfig& c) {
  std::string out;
  auto line = [&](std::string_view key, const auto& value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  if (c.command) line("command", to_string(*c.command));
  out += "\n[manifold]\n";
  line("kind", name_of(kKinds, c.kind));
  line("delta1_over_2pi_mhz", c.delta1_over_2pi_mhz);
  line("omega1_over_2pi_mhz", c.omega1_over_2pi_mhz);
  line("delta2_over_delta1", c.delta2_over_delta1);
  out += "\n[protocol]\n";
  line("tau_us", c.tau_us);
  if (c.theta_span) line("theta_span", to_string(*c.theta_span));
  line("phi", c.phi);
  if (c.initial_state) line("initial_state", to_string(*c.initial_state));
  if (c.t1_us || c.literal_sigma_minus) {
    out += "\n[noise]\n";
    if (c.t1_us) line("t1_us", *c.t1_us);
    if (c.t2_star_us) line("t2_star_us", *c.t2_star_us);
    if (c.literal_sigma_minus) line("literal_sigma_minus", "true");
  }
  if (c.dt_us) {
    out += "\n[numerics]\n";
    line("dt_us", *c.dt_us);
  }
  if (c.sweep) {
    out += "\n[sweep]\n";
    line("delta2_over_delta1_min", c.sweep->lo);
    line("delta2_over_delta1_max", c.sweep->hi);
    line("points", c.sweep->n);
  }
  out += "\n[grid]\n";
  line("n_theta", c.n_theta);
  out += "\n[map]\n";
  line("kind", to_string(c.map_kind));
  out += "\n[singularities]\n";
  line("threshold", c.singularity_threshold);
  out += "\n[output]\n";
  if (!c.output_path.empty()) line("path", c.output_path);
  line("format", to_string(c.format));
  return out;
}

}  // namespace curvtrack::app
