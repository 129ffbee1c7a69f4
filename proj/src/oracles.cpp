#include "curvtrack/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "curvtrack/errors.hpp"

namespace curvtrack {

using std::numbers::pi;

namespace {

struct Spinor {
  Complex e;
  Complex g;
};

Complex overlap(const Spinor& a, const Spinor& b) {
  return std::conj(a.e) * b.e + std::conj(a.g) * b.g;
}

// Eigenvectors of n.sigma written through the polar angles of the Bloch
// vector. Each corner gets an arbitrary phase; the loop product cancels it.
Spinor oracle_state(const ManifoldSpec& spec, double theta, double phi, Band band,
                    double min_norm) {
  const BlochVector v = bloch_vector(spec, {theta, phi});
  const double rho = std::hypot(v.x, v.y);
  if (!(std::hypot(rho, v.z) > min_norm)) {
    throw DegeneratePoint("oracle stencil touches the degeneracy");
  }
  const double alpha = std::atan2(rho, v.z);
  const double beta = std::atan2(v.y, v.x);
  const double c = std::cos(0.5 * alpha);
  const double s = std::sin(0.5 * alpha);
  if (band == Band::Excited) return {c, std::polar(s, beta)};
  return {-std::polar(s, -beta), c};
}

// arg of the loop product 00 -> 01 -> 11 -> 10 -> 00, with phi as the first
// leg. This orientation gives +B * area for B = d_theta A_phi - d_phi A_theta.
double loop_phase(const Spinor& s00, const Spinor& s10, const Spinor& s11, const Spinor& s01) {
  return std::arg(overlap(s00, s01) * overlap(s01, s11) * overlap(s11, s10) * overlap(s10, s00));
}

// Deterministic uniforms on [0, 1) independent of the standard library's
// distribution implementations.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 rng_;
};

struct SamplePoint {
  ManifoldSpec spec;
  SurfacePoint p;
};

// Random manifold and surface point whose splitting is at least min_gap_frac of
// its drive scale, so that curvature values stay moderate.
SamplePoint random_point(Sampler& rng, ManifoldKind kind, double min_gap_frac = 0.1) {
  for (;;) {
    const double d1 = rng.uniform(0.5, 2.0);
    const double o1 = rng.uniform(0.5, 2.0);
    const double d2 = d1 * rng.uniform(-3.0, 3.0);
    const ManifoldSpec spec = ManifoldSpec::make(kind, d1, d2, o1);
    const SurfacePoint p{rng.uniform(0.0, spec.theta_span()), rng.uniform(0.0, 2.0 * pi)};
    if (bloch_vector(spec, p).norm() > min_gap_frac * std::max(d1, o1)) return {spec, p};
  }
}

ManifoldSpec random_gapped_spec(Sampler& rng, ManifoldKind kind) {
  for (;;) {
    const double d1 = rng.uniform(0.5, 2.0);
    const ManifoldSpec spec =
        ManifoldSpec::make(kind, d1, d1 * rng.uniform(-4.27, 4.27), rng.uniform(0.5, 2.0));
    if (minimum_gap(spec, 512) > 0.05 * d1) return spec;
  }
}

OracleReport finish(std::string name, double max_err, int samples, double tol) {
  return {std::move(name), max_err, samples, max_err <= tol, tol};
}

constexpr std::uint64_t kSeed = 0x5eed2024ULL;
constexpr ManifoldKind kKinds[] = {ManifoldKind::Sphere, ManifoldKind::Torus};

}  // namespace

double oracle_curvature_fd(const ManifoldSpec& spec, const SurfacePoint& p, Band band, double h) {
  if (!(h > 0.0)) throw InvalidArgument("plaquette size must be positive");
  const double min_norm = 10.0 * kGapEpsilon;
  const double t0 = p.theta - 0.5 * h;
  const double t1 = p.theta + 0.5 * h;
  const double f0 = p.phi - 0.5 * h;
  const double f1 = p.phi + 0.5 * h;
  const Spinor s00 = oracle_state(spec, t0, f0, band, min_norm);
  const Spinor s10 = oracle_state(spec, t1, f0, band, min_norm);
  const Spinor s11 = oracle_state(spec, t1, f1, band, min_norm);
  const Spinor s01 = oracle_state(spec, t0, f1, band, min_norm);
  return loop_phase(s00, s10, s11, s01) / (h * h);
}

double oracle_chern_plaquette(const ManifoldSpec& spec, Band band, int n) {
  if (n < 2) throw InvalidArgument("lattice needs n >= 2");
  if (touches_degeneracy(spec, kGapEpsilon)) {
    throw DegeneratePoint("surface touches the degeneracy");
  }
  const double dt = spec.theta_span() / n;
  const double df = 2.0 * pi / n;
  std::vector<Spinor> grid(static_cast<std::size_t>((n + 1) * (n + 1)));
  auto at = [&](int i, int j) -> Spinor& { return grid[static_cast<std::size_t>(i * (n + 1) + j)]; };
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      at(i, j) = oracle_state(spec, i * dt, j * df, band, kGapEpsilon);
    }
  }
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      total += loop_phase(at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1));
    }
  }
  return total / (2.0 * pi);
}

std::vector<OracleReport> run_all_oracles(int budget) {
  return run_all_oracles(budget, berry_curvature_closed_form);
}

std::vector<OracleReport> run_all_oracles(int budget, const CurvatureRoute& closed_form) {
  budget = std::max(budget, 1);
  const int n_points = 10 * budget;
  std::vector<OracleReport> out;

  for (ManifoldKind kind : kKinds) {
    const std::string tag(to_string(kind));
    Sampler rng(kSeed + static_cast<std::uint64_t>(kind));
    double routes = 0.0;
    double plaquette = 0.0;
    double antisym = 0.0;
    double qgt = 0.0;
    double eig = 0.0;
    double compose = 0.0;
    for (int k = 0; k < n_points; ++k) {
      const auto [spec, p] = random_point(rng, kind);
      for (Band band : {Band::Ground, Band::Excited}) {
        const double ref = closed_form(spec, p, band);
        routes = std::max({routes, std::abs(berry_curvature_matrix_element(spec, p, band) - ref),
                           std::abs(berry_curvature_bloch(spec, p, band) - ref)});
        plaquette = std::max(plaquette, std::abs(oracle_curvature_fd(spec, p, band) - ref));
      }
      antisym = std::max(antisym, std::abs(berry_curvature_closed_form(spec, p, Band::Ground) +
                                           berry_curvature_closed_form(spec, p, Band::Excited)));
      try {
        const QGTensor q = qgt_numeric(spec, p, Band::Ground);
        qgt = std::max(qgt, std::abs(-2.0 * q.tp.imag() - closed_form(spec, p, Band::Ground)));
      } catch (const GaugeDiscontinuity&) {
        // anchor amplitude crossing inside the stencil; the point says nothing about accuracy
      }

      const HermitianMatrix2 h = hamiltonian(spec, p);
      const Eigensystem es = eig2(h);
      Mat2 rebuilt = es.e_ground * es.ground.projector() + es.e_excited * es.excited.projector();
      eig = std::max(eig, (rebuilt - h.matrix()).frobenius_norm() / h.norm());
      compose = std::max(compose, (pauli_compose(bloch_vector(spec, p)).matrix() - h.matrix())
                                      .frobenius_norm());
    }
    out.push_back(finish("curvature_routes_" + tag, routes, n_points, 1e-8));
    out.push_back(finish("curvature_plaquette_" + tag, plaquette, n_points, 1e-3));
    out.push_back(finish("band_antisymmetry_" + tag, antisym, n_points, 0.0));
    out.push_back(finish("qgt_imaginary_part_" + tag, qgt, n_points, 1e-4));
    out.push_back(finish("eig2_reconstruction_" + tag, eig, n_points, 1e-10));
    out.push_back(finish("pauli_compose_" + tag, compose, n_points, 0.0));
  }

  // Chern numbers: lattice oracle against the analytic value and the
  // quadrature route, on gapped specs.
  const int n_specs = std::max(2, budget / 5);
  Sampler rng(kSeed ^ 0xc4e7ULL);
  double lattice_sphere = 0.0;
  double quad_sphere = 0.0;
  double lattice_torus = 0.0;
  double quad_torus = 0.0;
  double sum_rule = 0.0;
  double euler = 0.0;
  for (int k = 0; k < n_specs; ++k) {
    const ManifoldSpec sphere = random_gapped_spec(rng, ManifoldKind::Sphere);
    const double exact = chern_closed_form_sphere(sphere.delta1, sphere.delta2);
    lattice_sphere =
        std::max(lattice_sphere, std::abs(oracle_chern_plaquette(sphere, Band::Ground, 32) - exact));
    const double c_ground = chern_conventional(sphere, Band::Ground, 256, 64);
    quad_sphere = std::max(quad_sphere, std::abs(c_ground - exact));
    sum_rule = std::max(
        sum_rule, std::abs(c_ground + chern_conventional(sphere, Band::Excited, 256, 64)));

    const ManifoldSpec torus = random_gapped_spec(rng, ManifoldKind::Torus);
    lattice_torus = std::max(lattice_torus, std::abs(oracle_chern_plaquette(torus, Band::Ground, 32)));
    quad_torus = std::max(quad_torus, std::abs(chern_conventional(torus, Band::Ground, 256, 64)));

    euler = std::max({euler, std::abs(euler_characteristic(sphere, 256, 64) - 2.0),
                      std::abs(euler_characteristic(torus, 256, 64))});
  }
  out.push_back(finish("chern_lattice_sphere", lattice_sphere, n_specs, 1e-9));
  out.push_back(finish("chern_quadrature_sphere", quad_sphere, n_specs, 1e-6));
  out.push_back(finish("chern_lattice_torus", lattice_torus, n_specs, 1e-9));
  out.push_back(finish("chern_quadrature_torus", quad_torus, n_specs, 1e-6));
  out.push_back(finish("chern_band_sum", sum_rule, n_specs, 2e-6));
  out.push_back(finish("euler_characteristic", euler, 2 * n_specs, 1e-6));
  return out;
}

}  // namespace curvtrack
