#include "curvtrack/app/commands.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <filesystem>
#include <numbers>
#include <ostream>

#include "curvtrack/app/acceptance.hpp"
#include "curvtrack/app/output.hpp"
#include "curvtrack/errors.hpp"
#include "curvtrack/experiments.hpp"
#include "curvtrack/response.hpp"

namespace curvtrack::app {

using std::numbers::pi;

namespace {

std::string flag_cell(bool flagged) { return flagged ? "1" : "0"; }

int status_code(RowStatus s) { return static_cast<int>(s); }

ExecutionOptions execution(const RunConfig& cfg, int threads) {
  ExecutionOptions opts;
  opts.threads = threads;
  opts.preparation = cfg.preparation();
  opts.dt = cfg.dt_us;
  return opts;
}

std::string map_title(const RunConfig& cfg, MapKind kind) {
  return fmt::format("{} | delta1/2pi = omega1/2pi = {} MHz, tau = {} us", to_string(kind),
                     format_value(cfg.delta1_over_2pi_mhz), format_value(cfg.tau_us));
}

std::string curvature_csv(const RunConfig& cfg, std::ostream& log) {
  const ManifoldSpec spec = cfg.spec();
  const RampProtocol protocol = cfg.protocol();
  const double dt = cfg.dt_us ? *cfg.dt_us : default_time_step(spec, protocol);
  const CurvatureProfile profile =
      dynamical_curvature_profile(spec, protocol, cfg.noise(), dt, cfg.preparation());
  CsvTable table({"t_us", "theta_over_pi", "sigma_y", "b_dyn"});
  for (const auto& p : profile.points) {
    table.add_row({format_value(p.t), format_value(p.theta / pi), format_value(p.sigma_y),
                   format_value(p.b_dyn)});
  }
  if (protocol.span() >= spec.theta_span()) {
    fmt::print(log, "dynamical Chern number: {}\n", format_value(dynamical_chern(profile)));
  }
  return table.str();
}

std::string chern_csv(const RunConfig& cfg, int threads, std::ostream& log) {
  const ExecutionOptions opts = execution(cfg, threads);
  std::vector<ChernRow> rows;
  if (cfg.sweep) {
    rows = chern_vs_offset(cfg.spec_at(0.0), *cfg.sweep, cfg.protocol(), cfg.noise(), opts);
  } else {
    const ChernRow row = chern_row(cfg.spec(), cfg.protocol(), cfg.noise(), opts);
    if (row.status == RowStatus::Degenerate || row.status == RowStatus::Failed) {
      throw DegeneratePoint(fmt::format("dynamical Chern number unavailable ({})", to_string(row.status)));
    }
    rows.push_back(row);
    rows.back().delta2_over_delta1 = cfg.delta2_over_delta1;
  }
  CsvTable table({"delta2_over_delta1", "chern_dyn", "chern_conv", "euler", "flag"});
  int flagged = 0;
  for (const auto& r : rows) {
    flagged += r.status != RowStatus::Ok;
    table.add_row({format_value(r.delta2_over_delta1), format_value(r.chern_dyn),
                   format_value(r.chern_conv), format_value(r.euler),
                   std::to_string(status_code(r.status))});
  }
  fmt::print(log, "{} rows, {} flagged\n", rows.size(), flagged);
  return table.str();
}

std::string evolve_csv(const RunConfig& cfg, std::ostream& log) {
  const ManifoldSpec spec = cfg.spec();
  const RampProtocol protocol = cfg.protocol();
  const double dt = cfg.dt_us ? *cfg.dt_us : default_time_step(spec, protocol);
  const Trajectory traj =
      evolve(spec, protocol, prepare(spec, protocol, cfg.preparation()), cfg.noise(), dt);
  CsvTable table({"t_us", "theta_over_pi", "rho_ee", "rho_gg", "rho_eg_re", "rho_eg_im", "sigma_y",
                  "purity"});
  for (const auto& s : traj.samples) {
    table.add_row({format_value(s.t), format_value(s.theta / pi), format_value(s.rho(0, 0).real()),
                   format_value(s.rho(1, 1).real()), format_value(s.rho(0, 1).real()),
                   format_value(s.rho(0, 1).imag()), format_value(s.sigma_y_expect),
                   format_value(s.rho.purity())});
  }
  fmt::print(log, "{} samples, final purity {}\n", traj.samples.size(),
             format_value(traj.samples.back().rho.purity()));
  return table.str();
}

MapResult compute_map(const RunConfig& cfg, int threads) {
  const OffsetRange range = cfg.sweep.value_or(OffsetRange{});
  const ManifoldSpec base = cfg.spec_at(0.0);
  const ExecutionOptions opts = execution(cfg, threads);
  switch (cfg.map_kind) {
    case MapSelect::Curvature:
      return curvature_map(base, range, cfg.protocol(), cfg.n_theta, opts);
    case MapSelect::OverlapGround:
      return overlap_map(base, range, cfg.n_theta, Band::Ground, threads);
    case MapSelect::OverlapExcited:
      return overlap_map(base, range, cfg.n_theta, Band::Excited, threads);
    case MapSelect::Fidelity:
      return fidelity_map(base, range, cfg.protocol(), cfg.noise(), cfg.n_theta, opts);
  }
  throw InvalidArgument("unknown map kind");
}

std::string map_output(const RunConfig& cfg, int threads, std::ostream& log) {
  const MapResult map = compute_map(cfg, threads);
  const auto [lo, hi] = std::minmax_element(map.values.begin(), map.values.end());
  fmt::print(log, "{} map {}x{}: min {} max {}\n", to_string(map.kind), map.rows(), map.cols(),
             format_value(*lo), format_value(*hi));
  if (cfg.format == OutputFormat::Svg) return render_heatmap(map, map_title(cfg, map.kind));

  const bool with_companion = !map.companion.empty();
  std::vector<std::string> cols = {"delta2_over_delta1", "theta_over_pi", "value", "flag"};
  if (with_companion) cols.push_back("bare_ground_population");
  CsvTable table(std::move(cols));
  for (std::size_t i = 0; i < map.rows(); ++i) {
    for (std::size_t j = 0; j < map.cols(); ++j) {
      std::vector<std::string> row = {format_value(map.grid.delta2_over_delta1[i]),
                                      format_value(map.grid.theta_over_pi[j]),
                                      format_value(map.value(i, j)), flag_cell(map.flagged(i, j))};
      if (with_companion) row.push_back(format_value(map.companion[i * map.cols() + j]));
      table.add_row(std::move(row));
    }
  }
  return table.str();
}

std::string singularities_output(const RunConfig& cfg, int threads, std::ostream& log) {
  const Band band = cfg.map_kind == MapSelect::OverlapExcited ? Band::Excited : Band::Ground;
  const MapResult map =
      overlap_map(cfg.spec_at(0.0), cfg.sweep.value_or(OffsetRange{}), cfg.n_theta, band, threads);
  const auto points = locate_singularities(map, cfg.singularity_threshold);
  for (const auto& p : points) {
    fmt::print(log, "singularity at delta2/delta1 = {}, theta/pi = {}\n",
               format_value(p.delta2_over_delta1), format_value(p.theta_over_pi));
  }
  if (cfg.format == OutputFormat::Svg) return render_heatmap(map, map_title(cfg, map.kind));
  CsvTable table({"delta2_over_delta1", "theta_over_pi", "gradient"});
  for (const auto& p : points) {
    table.add_row({format_value(p.delta2_over_delta1), format_value(p.theta_over_pi),
                   format_value(p.gradient)});
  }
  return table.str();
}

int run_validate(const RunOptions& opts, std::ostream& out) {
  AcceptanceOptions acc;
  acc.threads = opts.threads;
  bool all = true;
  run_acceptance(acc, [&](const CriterionResult& r) {
    all = all && r.passed;
    fmt::print(out, "{}\n", format_result(r));
    out.flush();
  });
  fmt::print(out, "{}\n", all ? "all criteria passed" : "some criteria FAILED");
  return all ? kExitOk : kExitPhysics;
}

}  // namespace

std::string produce(const RunConfig& cfg, int threads, std::ostream& log) {
  if (!cfg.command) throw ValidationError("command", "no command given");
  validate(cfg);
  switch (*cfg.command) {
    case Command::Curvature:
      return curvature_csv(cfg, log);
    case Command::Chern:
      return chern_csv(cfg, threads, log);
    case Command::Evolve:
      return evolve_csv(cfg, log);
    case Command::Map:
      return map_output(cfg, threads, log);
    case Command::Singularities:
      return singularities_output(cfg, threads, log);
    case Command::Validate:
      break;
  }
  throw InvalidArgument("validate has no file output");
}

int run(const RunConfig& cfg, const RunOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    if (opts.threads < 1) throw ValidationError("threads", "must be at least 1");
    if (cfg.command == Command::Validate) return run_validate(opts, out);
    const std::string content = produce(cfg, opts.threads, out);
    const std::filesystem::path path =
        std::filesystem::path(opts.out_dir) / cfg.resolved_output_path();
    write_atomic(path.string(), content);
    fmt::print(out, "wrote {}\n", path.string());
    return kExitOk;
  } catch (const PhysicsError& e) {
    fmt::print(err, "physics error: {}\n", e.what());
    return kExitPhysics;
  } catch (const ParseError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const ValidationError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitConfig;
  }
}

}  // namespace curvtrack::app
