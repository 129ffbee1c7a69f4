#pragma once

// Sweeps over the offset delta2 that reproduce the figure data tables:
// Chern number vs offset, curvature maps, eigenstate-overlap maps and
// fidelity maps over (delta2/delta1, theta/pi).
//
// Every row (one delta2 value) is computed independently and written into
// its own slot, so results do not depend on thread count or row order.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curvtrack/evolution.hpp"
#include "curvtrack/manifold.hpp"
#include "curvtrack/response.hpp"
#include "curvtrack/spectral.hpp"

namespace curvtrack {

struct OffsetRange {
  double lo = -2.0;  // delta2 / delta1
  double hi = 2.0;
  int n = 101;

  std::vector<double> values() const;

  friend bool operator==(const OffsetRange&, const OffsetRange&) = default;
};

struct SweepGrid {
  std::vector<double> delta2_over_delta1;
  std::vector<double> theta_over_pi;
  ManifoldSpec base_spec;
  RampProtocol protocol_template;

  /// Validates non-empty, strictly increasing axes.
  static SweepGrid make(std::vector<double> delta2_over_delta1, std::vector<double> theta_over_pi,
                        const ManifoldSpec& base_spec, const RampProtocol& protocol_template);

  ManifoldSpec spec_at(std::size_t row) const;
};

enum class MapKind { Curvature, OverlapGround, OverlapExcited, FidelityClosed, FidelityNoisy };

std::string_view to_string(MapKind kind);

struct MapResult {
  SweepGrid grid;
  MapKind kind = MapKind::Curvature;
  std::vector<double> values;        // row-major [delta2][theta]
  std::vector<std::uint8_t> flags;   // 1 where the value is a sentinel
  std::vector<double> companion;     // fidelity maps: bare |g> population; else empty

  std::size_t rows() const { return grid.delta2_over_delta1.size(); }
  std::size_t cols() const { return grid.theta_over_pi.size(); }
  double value(std::size_t i, std::size_t j) const { return values[i * cols() + j]; }
  bool flagged(std::size_t i, std::size_t j) const { return flags[i * cols() + j] != 0; }
};

struct ExecutionOptions {
  int threads = 1;
  Preparation preparation = Preparation::BareGround;
  /// Overrides the default time-step rule when set [us].
  std::optional<double> dt;
};

enum class RowStatus { Ok, Undefined, Degenerate, Failed };

std::string_view to_string(RowStatus status);

struct ChernRow {
  double delta2_over_delta1 = 0.0;
  double chern_dyn = 0.0;   // NaN when the dynamical run failed
  double chern_conv = 0.0;  // NaN where the conventional number is undefined
  double euler = 0.0;
  RowStatus status = RowStatus::Ok;
};

/// Grid size used for the Euler characteristic column.
inline constexpr int kEulerGrid = 256;

/// Single row of the table below for one spec. Failures go into status.
ChernRow chern_row(const ManifoldSpec& spec, const RampProtocol& protocol,
                   const std::optional<NoiseSpec>& noise, const ExecutionOptions& opts = {});

/// One row per offset: dynamical Chern number, conventional (analytic)
/// Chern number and Euler characteristic. Per-row failures are recorded in
/// the row status, not thrown. Needs range.n >= 3.
std::vector<ChernRow> chern_vs_offset(const ManifoldSpec& base_spec, const OffsetRange& range,
                                      const RampProtocol& protocol,
                                      const std::optional<NoiseSpec>& noise,
                                      const ExecutionOptions& opts = {});

/// Dynamical curvature profiles resampled onto an n_theta grid over the
/// torus period. Torus only.
MapResult curvature_map(const ManifoldSpec& base_spec, const OffsetRange& range,
                        const RampProtocol& protocol, int n_theta,
                        const ExecutionOptions& opts = {});

/// |<g|psi_band>|^2 from the closed-form eigenstates at phi = 0. Exact
/// degeneracies hold the sentinel 0.5 and are flagged. Torus only.
MapResult overlap_map(const ManifoldSpec& base_spec, const OffsetRange& range, int n_theta,
                      Band band, int threads = 1);

/// <psi_g(theta)|rho(t(theta))|psi_g(theta)> along the ramp, i.e. overlap
/// of the evolved state with the instantaneous ground eigenstate. The bare
/// population <g|rho|g> goes into `companion`. Torus only.
MapResult fidelity_map(const ManifoldSpec& base_spec, const OffsetRange& range,
                       const RampProtocol& protocol, const std::optional<NoiseSpec>& noise,
                       int n_theta, const ExecutionOptions& opts = {});

struct SingularPoint {
  double delta2_over_delta1 = 0.0;
  double theta_over_pi = 0.0;
  double gradient = 0.0;
};

/// Local maxima of |grad values| (in axis units) above threshold; maxima
/// closer than merge_radius to a stronger one are merged into it.
std::vector<SingularPoint> locate_singularities(const MapResult& map, double threshold,
                                                double merge_radius = 0.05);

}  // namespace curvtrack
