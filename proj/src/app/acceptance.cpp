#include "curvtrack/app/acceptance.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "curvtrack/app/commands.hpp"
#include "curvtrack/errors.hpp"
#include "curvtrack/experiments.hpp"
#include "curvtrack/oracles.hpp"

namespace curvtrack::app {

using std::numbers::pi;

namespace {

constexpr double kMhzScale = 1.735;    // delta1/2pi = omega1/2pi [MHz]
constexpr double kKhzScale = 0.01735;  // 17.35 kHz
constexpr double kFig4aMin = -2.375e-4;
constexpr double kFig4aMax = 5.623e-3;

double angular(double over_2pi_mhz) { return 2.0 * pi * over_2pi_mhz; }

ManifoldSpec scaled(ManifoldKind kind, double w, double d2_over_d1 = 0.0) {
  return ManifoldSpec::make(kind, w, d2_over_d1 * w, w);
}

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double operator()(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 rng_;
};

struct Outcome {
  bool ok = false;
  std::string detail;
};

template <class Fn>
CriterionResult timed(int id, std::string title, double limit, Fn&& fn) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  r.time_limit = limit;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Outcome o = fn();
    r.passed = o.ok;
    r.detail = std::move(o.detail);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.seconds >= limit) {
    r.passed = false;
    r.detail += fmt::format("; exceeded the {:.0f} s limit", limit);
  }
  return r;
}

std::string g(double v) { return fmt::format("{:.4g}", v); }

// 1
Outcome analytic_chern() {
  const double w = angular(kMhzScale);
  const double e0 = std::abs(chern_conventional(scaled(ManifoldKind::Sphere, w, 0.0), Band::Ground, 256, 256) - 1.0);
  const double e2 = std::abs(chern_conventional(scaled(ManifoldKind::Sphere, w, 2.0), Band::Ground, 256, 256));
  Uniform u(101);
  double et = 0.0;
  for (int k = 0; k < 10;) {
    const double d1 = w * u(0.5, 1.5);
    const ManifoldSpec spec =
        ManifoldSpec::make(ManifoldKind::Torus, d1, d1 * u(-4.27, 4.27), w * u(0.5, 1.5));
    if (minimum_gap(spec, 1024) < 0.05 * d1) continue;
    et = std::max(et, std::abs(chern_conventional(spec, Band::Ground, 256, 256)));
    ++k;
  }
  const double tol = 1e-6;
  return {e0 <= tol && e2 <= tol && et <= tol,
          fmt::format("|C-1| sphere d2=0: {}, |C| sphere d2=2d1: {}, max |C| over 10 tori: {} (tol 1e-6)",
                      g(e0), g(e2), g(et))};
}

// 2
Outcome euler_invariants() {
  const double w = angular(kMhzScale);
  Uniform u(202);
  double es = 0.0;
  double et = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double d1 = w * u(0.5, 1.5);
    const double ratio = u(-4.27, 4.27);
    const double o1 = w * u(0.5, 1.5);
    es = std::max(es, std::abs(euler_characteristic(
                          ManifoldSpec::make(ManifoldKind::Sphere, d1, ratio * d1, o1), 256, 256) - 2.0));
    et = std::max(et, std::abs(euler_characteristic(
                          ManifoldSpec::make(ManifoldKind::Torus, d1, ratio * d1, o1), 256, 256)));
  }
  return {es <= 1e-6 && et <= 1e-6,
          fmt::format("max |chi-2| sphere: {}, max |chi| torus: {} over 20 specs (tol 1e-6)", g(es), g(et))};
}

// 3
Outcome curvature_routes() {
  const auto reports = run_all_oracles(500);
  double routes = 0.0;
  double plaquette = 0.0;
  int samples = 0;
  for (const auto& r : reports) {
    if (r.name.rfind("curvature_routes_", 0) == 0) {
      routes = std::max(routes, r.max_abs_error);
      samples += r.samples;
    } else if (r.name.rfind("curvature_plaquette_", 0) == 0) {
      plaquette = std::max(plaquette, r.max_abs_error);
    }
  }
  return {routes <= 1e-8 && plaquette <= 1e-3 && samples >= 10000,
          fmt::format("{} points, both bands: route spread {} (tol 1e-8), plaquette {} (tol 1e-3)", samples,
                      g(routes), g(plaquette))};
}

// 4
Outcome dynamical_sphere() {
  const ManifoldSpec spec = scaled(ManifoldKind::Sphere, angular(kMhzScale));
  const std::vector<double> taus = {0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
  const auto study = convergence_study(spec, taus);
  double c1 = 0.0;
  std::string errs;
  bool monotone = true;
  for (std::size_t k = 0; k < study.size(); ++k) {
    if (study[k].tau == 1.0) c1 = study[k].chern_dyn;
    errs += fmt::format("{}{}:{}", k ? ", " : "", g(study[k].tau), g(study[k].chern_error));
    if (k > 0 && study[k].chern_error > 1.1 * study[k - 1].chern_error) monotone = false;
  }
  const double last = study.back().chern_error;
  const bool ok_c1 = std::abs(c1 - 1.0) <= 0.15;
  return {ok_c1 && monotone && last < 0.02,
          fmt::format("C(tau=1us) = {} [{}]; error by tau(us): {} [monotone within 10%: {}]; "
                      "error(16us) {} [{}]",
                      g(c1), ok_c1 ? "ok" : "out of 1+-0.15", errs, monotone ? "yes" : "NO", g(last),
                      last < 0.02 ? "ok" : ">= 0.02")};
}

// 5
Outcome fig3_sweep(int threads) {
  ExecutionOptions opts;
  opts.threads = threads;
  opts.preparation = Preparation::BareGround;
  const OffsetRange range{-4.27, 4.27, 101};
  auto sweep = [&](double scale) {
    const ManifoldSpec base = scaled(ManifoldKind::Torus, angular(scale));
    return chern_vs_offset(base, range, RampProtocol::full_sweep(base, 1.0), std::nullopt, opts);
  };
  double khz_max = 0.0;
  double khz_at = 0.0;
  bool finite = true;
  for (const auto& r : sweep(kKhzScale)) {
    finite = finite && std::isfinite(r.chern_dyn);
    if (std::abs(r.chern_dyn) > khz_max) {
      khz_max = std::abs(r.chern_dyn);
      khz_at = r.delta2_over_delta1;
    }
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& r : sweep(kMhzScale)) {
    finite = finite && std::isfinite(r.chern_dyn);
    lo = std::min(lo, r.chern_dyn);
    hi = std::max(hi, r.chern_dyn);
  }
  const bool ok_khz = khz_max < 0.05;
  const bool ok_mhz = lo < 0.1 && hi > 0.8;
  return {finite && ok_khz && ok_mhz,
          fmt::format("17.35 kHz: max |C| = {} at d2/d1 = {} [{}]; 1.735 MHz: min {} max {} [{}]", g(khz_max),
                      g(khz_at), ok_khz ? "ok" : "NOT < 0.05", g(lo), g(hi), ok_mhz ? "ok" : "no oscillation")};
}

// 6
Outcome fig4a_map(int threads) {
  ExecutionOptions opts;
  opts.threads = threads;
  opts.preparation = Preparation::BareGround;
  auto extremes = [&](double delta1) {
    const ManifoldSpec base = ManifoldSpec::make(ManifoldKind::Torus, delta1, 0.0, delta1);
    const MapResult m = curvature_map(base, {}, RampProtocol::full_sweep(base, 1.0), 201, opts);
    const auto [lo, hi] = std::minmax_element(m.values.begin(), m.values.end());
    return std::pair{*lo, *hi};
  };
  auto within = [](double v, double target) { return std::abs(v - target) <= 0.25 * std::abs(target); };
  const auto [lo, hi] = extremes(angular(kKhzScale));
  const auto [lo_alt, hi_alt] = extremes(kKhzScale);
  const bool ok = within(lo, kFig4aMin) && within(hi, kFig4aMax);
  const bool ok_alt = within(lo_alt, kFig4aMin) && within(hi_alt, kFig4aMax);
  return {ok, fmt::format("angular (delta1 = 2pi x 17.35 kHz): min {} max {} [{}]; "
                          "without 2pi (delta1 = 0.01735 rad/us): min {} max {} [{}]; targets {} / {} +-25%",
                          g(lo), g(hi), ok ? "in band" : "OUT of band", g(lo_alt), g(hi_alt),
                          ok_alt ? "in band" : "out of band", g(kFig4aMin), g(kFig4aMax))};
}

// 7
Outcome singularities(int threads) {
  const ManifoldSpec base = scaled(ManifoldKind::Torus, angular(kKhzScale));
  const MapResult map = overlap_map(base, {}, 201, Band::Ground, threads);
  const auto found = locate_singularities(map, RunConfig{}.singularity_threshold);
  const double cell_x = map.grid.delta2_over_delta1[1] - map.grid.delta2_over_delta1[0];
  const double cell_y = map.grid.theta_over_pi[1] - map.grid.theta_over_pi[0];
  const std::pair<double, double> targets[] = {{-1.0, 0.0}, {-1.0, 2.0}, {1.0, 1.0}};
  std::vector<bool> used(found.size(), false);
  bool ok = found.size() == 3;
  for (const auto& [tx, ty] : targets) {
    bool hit = false;
    for (std::size_t k = 0; k < found.size() && !hit; ++k) {
      if (!used[k] && std::abs(found[k].delta2_over_delta1 - tx) <= cell_x * (1 + 1e-9) &&
          std::abs(found[k].theta_over_pi - ty) <= cell_y * (1 + 1e-9)) {
        used[k] = hit = true;
      }
    }
    ok = ok && hit;
  }
  std::string list;
  for (const auto& p : found) {
    list += fmt::format("{}({}, {})", list.empty() ? "" : " ", g(p.delta2_over_delta1), g(p.theta_over_pi));
  }
  return {ok, fmt::format("found {} point(s): {}", found.size(), list)};
}

// 8
Outcome open_system(int threads) {
  ExecutionOptions opts;
  opts.threads = threads;
  opts.preparation = Preparation::BareGround;
  const ManifoldSpec base = scaled(ManifoldKind::Torus, angular(kMhzScale));
  const RampProtocol protocol = RampProtocol::full_sweep(base, 1.0);
  const NoiseSpec noise = NoiseSpec::make(60.0, 40.0);
  const MapResult clean = fidelity_map(base, {}, protocol, std::nullopt, 201, opts);
  const MapResult noisy = fidelity_map(base, {}, protocol, noise, 201, opts);
  double diff = 0.0;
  for (std::size_t k = 0; k < clean.values.size(); ++k) {
    diff = std::max(diff, std::abs(clean.values[k] - noisy.values[k]));
  }

  // H = 0: amplitude damping and dephasing have closed forms.
  const ManifoldSpec idle{ManifoldKind::Torus, 0.0, 0.0, 0.0};
  const RampProtocol hold = RampProtocol::make(0.0, 2.0 * pi, 100.0, 0.0);
  const double dt = default_time_step(idle, hold);
  const Trajectory decay =
      evolve_lindblad(idle, hold, DensityMatrix2::from_pure(PureState2::excited()), noise, dt);
  const double s = 1.0 / std::sqrt(2.0);
  const Trajectory dephase =
      evolve_lindblad(idle, hold, DensityMatrix2::from_pure(PureState2(s, s)), noise, dt);
  double e_t1 = 0.0;
  for (const auto& smp : decay.samples) {
    e_t1 = std::max(e_t1, std::abs(smp.rho(0, 0).real() - std::exp(-smp.t / noise.t1)));
  }
  double e_t2 = 0.0;
  for (const auto& smp : dephase.samples) {
    e_t2 = std::max(e_t2, std::abs(std::abs(smp.rho(0, 1)) - 0.5 * std::exp(-smp.t / noise.t2_star)));
  }
  const bool ok = diff < 0.05 && e_t1 <= 1e-6 && e_t2 <= 1e-6;
  return {ok, fmt::format("noisy vs noiseless fidelity max diff {} (tol 0.05); H=0 rho_ee error {}, "
                          "|rho_eg| error {} (tol 1e-6)",
                          g(diff), g(e_t1), g(e_t2))};
}

// 9
Outcome integrator_quality() {
  struct Case {
    const char* name;
    ManifoldSpec spec;
    std::optional<NoiseSpec> noise;
  };
  const double w = angular(kMhzScale);
  const Case cases[] = {
      {"sphere", scaled(ManifoldKind::Sphere, w), std::nullopt},
      {"torus", scaled(ManifoldKind::Torus, w, 0.5), std::nullopt},
      {"torus+noise", scaled(ManifoldKind::Torus, w, 0.5), NoiseSpec::make(60.0, 40.0)},
  };
  bool ok = true;
  double worst_trace = 0.0;
  double worst_herm = 0.0;
  std::string ratios;
  for (const auto& c : cases) {
    const RampProtocol protocol = RampProtocol::full_sweep(c.spec, 1.0);
    const DensityMatrix2 rho0 = prepare_ground(c.spec, protocol);
    const double dt = 0.08 / max_hamiltonian_norm(c.spec, protocol);
    Mat2 finals[3];
    for (int k = 0; k < 3; ++k) {
      const Trajectory traj = evolve(c.spec, protocol, rho0, c.noise, dt / std::pow(2.0, k));
      for (const auto& s : traj.samples) {
        const Mat2& m = s.rho.matrix();
        worst_trace = std::max(worst_trace, std::abs(m.trace() - 1.0));
        worst_herm = std::max(worst_herm, std::abs(m(0, 1) - std::conj(m(1, 0))));
      }
      finals[k] = traj.samples.back().rho.matrix();
    }
    const double ratio = (finals[0] - finals[1]).frobenius_norm() / (finals[1] - finals[2]).frobenius_norm();
    ok = ok && ratio >= 12.0 && ratio <= 20.0;
    ratios += fmt::format("{}{} {}", ratios.empty() ? "" : ", ", c.name, g(ratio));
  }
  ok = ok && worst_trace <= 1e-9 && worst_herm <= 1e-10;
  return {ok, fmt::format("step-halving ratios: {} (want 12..20); max |Tr-1| {}, max Hermiticity defect {}",
                          ratios, g(worst_trace), g(worst_herm))};
}

// 10
std::vector<RunConfig> determinism_configs() {
  std::vector<RunConfig> out = {fig3_config(), fig4_config(), fig5_config()};
  RunConfig overlap = fig4_config();
  overlap.map_kind = MapSelect::OverlapGround;
  overlap.output_path = "fig4b_overlap.csv";
  out.push_back(overlap);
  RunConfig sing = fig4_config();
  sing.command = Command::Singularities;
  sing.output_path = "fig4b_singularities.csv";
  out.push_back(sing);
  RunConfig clean = fig5_config();
  clean.t1_us.reset();
  clean.t2_star_us.reset();
  clean.output_path = "fig5_fidelity_closed.csv";
  out.push_back(clean);
  RunConfig sphere;
  sphere.command = Command::Chern;
  sphere.kind = ManifoldKind::Sphere;
  sphere.delta1_over_2pi_mhz = sphere.omega1_over_2pi_mhz = kMhzScale;
  sphere.tau_us = 1.0;
  sphere.output_path = "sphere_chern.csv";
  out.push_back(sphere);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome determinism(const AcceptanceOptions& opts) {
  namespace fs = std::filesystem;
  const bool own_dir = opts.scratch_dir.empty();
  const fs::path root =
      own_dir ? fs::temp_directory_path() /
                    fmt::format("curvtrack-acceptance-{}",
                                std::chrono::steady_clock::now().time_since_epoch().count())
              : fs::path(opts.scratch_dir);
  struct Pass {
    const char* dir;
    int threads;
  };
  const Pass passes[] = {{"run1", 1}, {"run2", 1}, {"threads4", 4}};
  const auto configs = determinism_configs();
  std::ostringstream sink;
  int exit_failures = 0;
  for (const auto& p : passes) {
    RunOptions ro;
    ro.out_dir = (root / p.dir).string();
    ro.threads = p.threads;
    for (const auto& cfg : configs) exit_failures += run(cfg, ro, sink, sink) != kExitOk;
  }
  int mismatches = 0;
  std::string which;
  for (const auto& cfg : configs) {
    const std::string name = cfg.resolved_output_path();
    const std::string ref = slurp(root / "run1" / name);
    for (const char* other : {"run2", "threads4"}) {
      if (ref.empty() || slurp(root / other / name) != ref) {
        ++mismatches;
        which += fmt::format(" {}/{}", other, name);
      }
    }
  }
  if (own_dir) {
    std::error_code ec;
    fs::remove_all(root, ec);
  }
  return {exit_failures == 0 && mismatches == 0,
          fmt::format("{} commands x (2 runs at 1 thread + 1 run at 4 threads): {} failed run(s), {} "
                      "mismatch(es){}",
                      configs.size(), exit_failures, mismatches, which)};
}

RunConfig torus_base(double scale) {
  RunConfig c;
  c.kind = ManifoldKind::Torus;
  c.delta1_over_2pi_mhz = scale;
  c.omega1_over_2pi_mhz = scale;
  c.tau_us = 1.0;
  c.initial_state = Preparation::BareGround;
  return c;
}

}  // namespace

RunConfig fig3_config() {
  RunConfig c = torus_base(kMhzScale);
  c.command = Command::Chern;
  c.sweep = OffsetRange{-4.27, 4.27, 101};
  c.output_path = "fig3_chern.csv";
  return c;
}

RunConfig fig4_config() {
  RunConfig c = torus_base(kKhzScale);
  c.command = Command::Map;
  c.sweep = OffsetRange{-2.0, 2.0, 101};
  c.n_theta = 201;
  c.map_kind = MapSelect::Curvature;
  c.output_path = "fig4a_curvature.csv";
  return c;
}

RunConfig fig5_config() {
  RunConfig c = torus_base(kMhzScale);
  c.command = Command::Map;
  c.sweep = OffsetRange{-2.0, 2.0, 101};
  c.n_theta = 201;
  c.map_kind = MapSelect::Fidelity;
  c.t1_us = 60.0;
  c.t2_star_us = 40.0;
  c.output_path = "fig5_fidelity_noisy.csv";
  return c;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  auto record = [&](CriterionResult r) {
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  };
  const int threads = std::max(1, opts.threads);
  record(timed(1, "analytic Chern numbers", 10.0, analytic_chern));
  record(timed(2, "Euler characteristic", 5.0, euler_invariants));
  record(timed(3, "three-route curvature equivalence", 30.0, curvature_routes));
  record(timed(4, "dynamical Chern number on the sphere", 60.0, dynamical_sphere));
  record(timed(5, "torus Chern sweep", 300.0, [&] { return fig3_sweep(threads); }));
  record(timed(6, "torus curvature map range", 180.0, [&] { return fig4a_map(threads); }));
  record(timed(7, "singularity locations", 30.0, [&] { return singularities(threads); }));
  record(timed(8, "open-system robustness", 180.0, [&] { return open_system(threads); }));
  record(timed(9, "integrator quality", 120.0, integrator_quality));
  record(timed(10, "determinism", 600.0, [&] { return determinism(opts); }));
  return out;
}

std::string format_result(const CriterionResult& r) {
  return fmt::format("{}  [{:2}] {} ({:.2f} s / {:.0f} s): {}", r.passed ? "PASS" : "FAIL", r.id, r.title,
                     r.seconds, r.time_limit, r.detail);
}

}  // namespace curvtrack::app
