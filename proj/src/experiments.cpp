#include "curvtrack/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "curvtrack/errors.hpp"
#include "curvtrack/quadrature.hpp"
#include "parallel.hpp"

namespace curvtrack {

using std::numbers::pi;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kOverlapSentinel = 0.5;

void require_torus(const ManifoldSpec& spec, const char* op) {
  if (spec.kind != ManifoldKind::Torus) {
    throw InvalidArgument(std::string(op) + " is defined for torus specs only");
  }
}

void require_increasing_ramp(const RampProtocol& protocol) {
  if (!(protocol.theta_end > protocol.theta_start)) {
    throw InvalidArgument("map protocols must ramp theta upwards");
  }
}

double ramp_time_step(const ManifoldSpec& spec, const RampProtocol& protocol,
                      const ExecutionOptions& opts, int n_theta) {
  double dt = opts.dt ? *opts.dt : default_time_step(spec, protocol);
  // Integrator grid at least 10x denser than the output grid.
  if (n_theta > 1) dt = std::min(dt, protocol.tau / (10.0 * (n_theta - 1)));
  return dt;
}

SweepGrid ramp_grid(const ManifoldSpec& base_spec, const OffsetRange& range,
                    const RampProtocol& protocol, int n_theta) {
  if (n_theta < 2) throw InvalidArgument("n_theta must be at least 2");
  return SweepGrid::make(range.values(),
                         linspace(protocol.theta_start / pi, protocol.theta_end / pi, n_theta),
                         base_spec, protocol);
}

// Linear interpolation position of theta inside an increasing sample array.
struct Bracket {
  std::size_t lo = 0;
  double frac = 0.0;
};

template <class ThetaOf>
Bracket bracket(std::size_t n, ThetaOf&& theta_of, double theta) {
  if (theta <= theta_of(0)) return {0, 0.0};
  if (theta >= theta_of(n - 1)) return {n - 2, 1.0};
  std::size_t lo = 0;
  std::size_t hi = n - 1;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (theta_of(mid) <= theta ? lo : hi) = mid;
  }
  const double span = theta_of(hi) - theta_of(lo);
  return {lo, span > 0.0 ? (theta - theta_of(lo)) / span : 0.0};
}

}  // namespace

std::vector<double> OffsetRange::values() const {
  if (n == 1) return {lo};
  return linspace(lo, hi, n);
}

SweepGrid SweepGrid::make(std::vector<double> delta2_over_delta1, std::vector<double> theta_over_pi,
                          const ManifoldSpec& base_spec, const RampProtocol& protocol_template) {
  auto check = [](const std::vector<double>& axis, const char* name) {
    if (axis.empty()) throw InvalidArgument(std::string(name) + " axis is empty");
    for (std::size_t k = 1; k < axis.size(); ++k) {
      if (!(axis[k] > axis[k - 1])) {
        throw InvalidArgument(std::string(name) + " axis must be strictly increasing");
      }
    }
  };
  check(delta2_over_delta1, "delta2_over_delta1");
  check(theta_over_pi, "theta_over_pi");
  return {std::move(delta2_over_delta1), std::move(theta_over_pi), base_spec, protocol_template};
}

ManifoldSpec SweepGrid::spec_at(std::size_t row) const {
  ManifoldSpec s = base_spec;
  s.delta2 = delta2_over_delta1[row] * base_spec.delta1;
  return s;
}

std::string_view to_string(MapKind kind) {
  switch (kind) {
    case MapKind::Curvature:
      return "curvature";
    case MapKind::OverlapGround:
      return "overlap_ground";
    case MapKind::OverlapExcited:
      return "overlap_excited";
    case MapKind::FidelityClosed:
      return "fidelity_closed";
    case MapKind::FidelityNoisy:
      return "fidelity_noisy";
  }
  return "unknown";
}

std::string_view to_string(RowStatus status) {
  switch (status) {
    case RowStatus::Ok:
      return "ok";
    case RowStatus::Undefined:
      return "undefined";
    case RowStatus::Degenerate:
      return "degenerate";
    case RowStatus::Failed:
      return "failed";
  }
  return "unknown";
}

ChernRow chern_row(const ManifoldSpec& spec, const RampProtocol& protocol,
                   const std::optional<NoiseSpec>& noise, const ExecutionOptions& opts) {
  ChernRow row;
  row.delta2_over_delta1 = spec.delta2 / spec.delta1;
  row.euler = euler_characteristic(spec, kEulerGrid, kEulerGrid);

  if (spec.kind == ManifoldKind::Sphere) {
    try {
      row.chern_conv = chern_closed_form_sphere(spec.delta1, spec.delta2);
    } catch (const UndefinedChern&) {
      row.chern_conv = kNaN;
      row.status = RowStatus::Undefined;
    }
  } else if (touches_degeneracy(spec, kGapEpsilon)) {
    row.chern_conv = kNaN;
    row.status = RowStatus::Undefined;
  } else {
    row.chern_conv = 0.0;
  }

  try {
    const double dt = opts.dt ? *opts.dt : default_time_step(spec, protocol);
    row.chern_dyn =
        dynamical_chern(dynamical_curvature_profile(spec, protocol, noise, dt, opts.preparation));
  } catch (const DegeneratePoint&) {
    row.chern_dyn = kNaN;
    row.status = RowStatus::Degenerate;
  } catch (const PhysicsError&) {
    row.chern_dyn = kNaN;
    row.status = RowStatus::Failed;
  }
  return row;
}

std::vector<ChernRow> chern_vs_offset(const ManifoldSpec& base_spec, const OffsetRange& range,
                                      const RampProtocol& protocol,
                                      const std::optional<NoiseSpec>& noise,
                                      const ExecutionOptions& opts) {
  if (range.n < 3) throw InvalidArgument("chern_vs_offset needs at least 3 offsets");
  const std::vector<double> offsets = range.values();
  std::vector<ChernRow> rows(offsets.size());
  detail::parallel_for(offsets.size(), opts.threads, [&](std::size_t i) {
    ManifoldSpec spec = base_spec;
    spec.delta2 = offsets[i] * base_spec.delta1;
    rows[i] = chern_row(spec, protocol, noise, opts);
    rows[i].delta2_over_delta1 = offsets[i];
  });
  return rows;
}

MapResult curvature_map(const ManifoldSpec& base_spec, const OffsetRange& range,
                        const RampProtocol& protocol, int n_theta, const ExecutionOptions& opts) {
  require_torus(base_spec, "curvature_map");
  require_increasing_ramp(protocol);
  MapResult map{ramp_grid(base_spec, range, protocol, n_theta), MapKind::Curvature, {}, {}, {}};
  const std::size_t cols = map.cols();
  map.values.assign(map.rows() * cols, 0.0);
  map.flags.assign(map.rows() * cols, 0);

  detail::parallel_for(map.rows(), opts.threads, [&](std::size_t i) {
    const ManifoldSpec spec = map.grid.spec_at(i);
    try {
      const CurvatureProfile profile = dynamical_curvature_profile(
          spec, protocol, std::nullopt, ramp_time_step(spec, protocol, opts, n_theta),
          opts.preparation);
      const auto& pts = profile.points;
      auto theta_of = [&](std::size_t k) { return pts[k].theta; };
      for (std::size_t j = 0; j < cols; ++j) {
        const auto [lo, frac] = bracket(pts.size(), theta_of, pi * map.grid.theta_over_pi[j]);
        map.values[i * cols + j] = (1.0 - frac) * pts[lo].b_dyn + frac * pts[lo + 1].b_dyn;
      }
    } catch (const PhysicsError&) {
      std::fill_n(map.flags.begin() + static_cast<std::ptrdiff_t>(i * cols), cols, 1);
    }
  });
  return map;
}

MapResult overlap_map(const ManifoldSpec& base_spec, const OffsetRange& range, int n_theta,
                      Band band, int threads) {
  require_torus(base_spec, "overlap_map");
  const RampProtocol sweep = RampProtocol::full_sweep(base_spec, 1.0);
  MapResult map{ramp_grid(base_spec, range, sweep, n_theta),
                band == Band::Ground ? MapKind::OverlapGround : MapKind::OverlapExcited,
                {},
                {},
                {}};
  const std::size_t cols = map.cols();
  map.values.assign(map.rows() * cols, 0.0);
  map.flags.assign(map.rows() * cols, 0);

  detail::parallel_for(map.rows(), threads, [&](std::size_t i) {
    const ManifoldSpec spec = map.grid.spec_at(i);
    for (std::size_t j = 0; j < cols; ++j) {
      const auto [delta, omega] = control_fields(spec, pi * map.grid.theta_over_pi[j]);
      try {
        const EigenPair eig = eigenstates_closed_form(delta, omega, 0.0);
        const PureState2& psi = band == Band::Ground ? eig.ground : eig.excited;
        map.values[i * cols + j] = std::norm(psi.amp_g());
      } catch (const DegeneratePoint&) {
        map.values[i * cols + j] = kOverlapSentinel;
        map.flags[i * cols + j] = 1;
      }
    }
  });
  return map;
}

MapResult fidelity_map(const ManifoldSpec& base_spec, const OffsetRange& range,
                       const RampProtocol& protocol, const std::optional<NoiseSpec>& noise,
                       int n_theta, const ExecutionOptions& opts) {
  require_torus(base_spec, "fidelity_map");
  require_increasing_ramp(protocol);
  MapResult map{ramp_grid(base_spec, range, protocol, n_theta),
                noise ? MapKind::FidelityNoisy : MapKind::FidelityClosed,
                {},
                {},
                {}};
  const std::size_t cols = map.cols();
  map.values.assign(map.rows() * cols, 0.0);
  map.flags.assign(map.rows() * cols, 0);
  map.companion.assign(map.rows() * cols, 0.0);

  detail::parallel_for(map.rows(), opts.threads, [&](std::size_t i) {
    const ManifoldSpec spec = map.grid.spec_at(i);
    const std::size_t row = i * cols;
    try {
      const Trajectory traj =
          evolve(spec, protocol, prepare(spec, protocol, opts.preparation), noise,
                 ramp_time_step(spec, protocol, opts, n_theta));
      const auto& samples = traj.samples;
      auto theta_of = [&](std::size_t k) { return samples[k].theta; };
      for (std::size_t j = 0; j < cols; ++j) {
        const double theta = pi * map.grid.theta_over_pi[j];
        const auto [lo, frac] = bracket(samples.size(), theta_of, theta);
        const Mat2 mixed = (1.0 - frac) * samples[lo].rho.matrix() + frac * samples[lo + 1].rho.matrix();
        const DensityMatrix2 rho = DensityMatrix2::from_matrix(mixed);
        map.companion[row + j] = std::clamp(rho(1, 1).real(), 0.0, 1.0);
        const auto [delta, omega] = control_fields(spec, theta);
        try {
          map.values[row + j] = fidelity(rho, eigenstates_closed_form(delta, omega, 0.0).ground);
        } catch (const DegeneratePoint&) {
          map.values[row + j] = kOverlapSentinel;
          map.flags[row + j] = 1;
        }
      }
    } catch (const PhysicsError&) {
      std::fill_n(map.values.begin() + static_cast<std::ptrdiff_t>(row), cols, kOverlapSentinel);
      std::fill_n(map.flags.begin() + static_cast<std::ptrdiff_t>(row), cols, 1);
    }
  });
  return map;
}

std::vector<SingularPoint> locate_singularities(const MapResult& map, double threshold,
                                                double merge_radius) {
  if (map.kind != MapKind::OverlapGround && map.kind != MapKind::OverlapExcited) {
    throw InvalidArgument("locate_singularities expects an overlap map");
  }
  const std::size_t rows = map.rows();
  const std::size_t cols = map.cols();
  const auto& xs = map.grid.delta2_over_delta1;
  const auto& ys = map.grid.theta_over_pi;

  // Derivative along one axis: central inside, one-sided at the edges.
  auto axis_derivative = [](const std::vector<double>& axis, std::size_t k, std::size_t n,
                            auto&& value_at) {
    if (n < 2) return 0.0;
    const std::size_t a = k == 0 ? 0 : k - 1;
    const std::size_t b = k + 1 == n ? k : k + 1;
    return (value_at(b) - value_at(a)) / (axis[b] - axis[a]);
  };

  std::vector<double> grad(rows * cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double gx = axis_derivative(xs, i, rows, [&](std::size_t r) { return map.value(r, j); });
      const double gy = axis_derivative(ys, j, cols, [&](std::size_t c) { return map.value(i, c); });
      grad[i * cols + j] = std::hypot(gx, gy);
    }
  }

  std::vector<SingularPoint> candidates;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double g = grad[i * cols + j];
      if (!(g > threshold)) continue;
      bool is_max = true;
      for (int di = -1; di <= 1 && is_max; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const auto ni = static_cast<std::ptrdiff_t>(i) + di;
          const auto nj = static_cast<std::ptrdiff_t>(j) + dj;
          if (ni < 0 || nj < 0 || ni >= static_cast<std::ptrdiff_t>(rows) ||
              nj >= static_cast<std::ptrdiff_t>(cols)) {
            continue;
          }
          if (grad[static_cast<std::size_t>(ni) * cols + static_cast<std::size_t>(nj)] > g) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) candidates.push_back({xs[i], ys[j], g});
    }
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const SingularPoint& a, const SingularPoint& b) { return a.gradient > b.gradient; });
  std::vector<SingularPoint> peaks;
  for (const auto& c : candidates) {
    const bool merged = std::any_of(peaks.begin(), peaks.end(), [&](const SingularPoint& p) {
      return std::hypot(p.delta2_over_delta1 - c.delta2_over_delta1,
                        p.theta_over_pi - c.theta_over_pi) <= merge_radius;
    });
    if (!merged) peaks.push_back(c);
  }
  std::sort(peaks.begin(), peaks.end(), [](const SingularPoint& a, const SingularPoint& b) {
    return a.delta2_over_delta1 != b.delta2_over_delta1 ? a.delta2_over_delta1 < b.delta2_over_delta1
                                                        : a.theta_over_pi < b.theta_over_pi;
  });
  return peaks;
}

}  // namespace curvtrack
