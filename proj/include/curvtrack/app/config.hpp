#pragma once

// Run configuration: a flat key = value document with optional [section]
// headers. Keys inside a section are prefixed with "section.", so
//
//   [manifold]
//   kind = torus
//
// and "manifold.kind = torus" are the same thing. '#' starts a comment.
// Frequencies are given as value/2pi in MHz and converted to rad/us.

#include <optional>
#include <string>
#include <string_view>

#include "curvtrack/evolution.hpp"
#include "curvtrack/experiments.hpp"
#include "curvtrack/manifold.hpp"
#include "curvtrack/response.hpp"

namespace curvtrack::app {

enum class Command { Curvature, Chern, Evolve, Map, Singularities, Validate };
enum class ThetaSpan { Pi, TwoPi };
enum class MapSelect { Curvature, OverlapGround, OverlapExcited, Fidelity };
enum class OutputFormat { Csv, Svg };

std::string_view to_string(Command c);
std::string_view to_string(ThetaSpan s);
std::string_view to_string(MapSelect m);
std::string_view to_string(OutputFormat f);
std::string_view to_string(Preparation p);

/// Throws ValidationError("command") for unknown names.
Command parse_command(std::string_view name);

struct RunConfig {
  std::optional<Command> command;

  ManifoldKind kind = ManifoldKind::Sphere;
  double delta1_over_2pi_mhz = 0.0;
  double omega1_over_2pi_mhz = 0.0;
  double delta2_over_delta1 = 0.0;

  double tau_us = 0.0;
  std::optional<ThetaSpan> theta_span;  // unset: the surface's own period
  double phi = 0.0;
  std::optional<Preparation> initial_state;

  std::optional<double> t1_us;
  std::optional<double> t2_star_us;
  bool literal_sigma_minus = false;

  std::optional<double> dt_us;

  std::optional<OffsetRange> sweep;
  int n_theta = 201;
  MapSelect map_kind = MapSelect::Curvature;
  double singularity_threshold = 10.0;

  std::string output_path;  // empty: "<command>.<format>"
  OutputFormat format = OutputFormat::Csv;

  ManifoldSpec spec() const;
  ManifoldSpec spec_at(double delta2_over_delta1) const;
  RampProtocol protocol() const;
  std::optional<NoiseSpec> noise() const;
  /// initial_state if set, else BareGround for sweeps and maps and
  /// EigenGround for single-trajectory commands.
  Preparation preparation() const;
  std::string resolved_output_path() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws ParseError (syntax, unknown or repeated key, malformed value) or
/// ValidationError naming the offending field.
RunConfig parse_config(std::string_view text);

/// Reads and parses a file. Throws IoError if it cannot be read.
RunConfig load_config(const std::string& path);

/// Checks cross-field constraints. parse_config calls this already.
void validate(const RunConfig& cfg);

/// Text that parse_config maps back to an equal RunConfig.
std::string render_config(const RunConfig& cfg);

}  // namespace curvtrack::app
