#include "curvtrack/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "curvtrack/errors.hpp"
#include "curvtrack/quadrature.hpp"

namespace curvtrack {

using std::numbers::pi;

std::string_view to_string(ManifoldKind kind) {
  return kind == ManifoldKind::Sphere ? "sphere" : "torus";
}

ManifoldSpec ManifoldSpec::make(ManifoldKind kind, double delta1, double delta2, double omega1) {
  if (!std::isfinite(delta1) || !std::isfinite(delta2) || !std::isfinite(omega1)) {
    throw InvalidArgument("manifold amplitudes must be finite");
  }
  if (!(delta1 > 0.0)) throw InvalidArgument("delta1 must be positive");
  if (!(omega1 > 0.0)) throw InvalidArgument("omega1 must be positive");
  return ManifoldSpec{kind, delta1, delta2, omega1};
}

double ManifoldSpec::theta_span() const { return kind == ManifoldKind::Sphere ? pi : 2.0 * pi; }

ControlFields control_fields(const ManifoldSpec& spec, double theta) {
  return {spec.delta1 * std::cos(theta) + spec.delta2, spec.omega1 * std::sin(theta)};
}

BlochVector bloch_vector(const ManifoldSpec& spec, const SurfacePoint& p) {
  const auto [delta, omega] = control_fields(spec, p.theta);
  const double c = std::cos(p.phi);
  const double s = std::sin(p.phi);
  if (spec.kind == ManifoldKind::Sphere) return {omega * c, omega * s, delta};
  return {delta * c, delta * s, omega};
}

HermitianMatrix2 hamiltonian(const ManifoldSpec& spec, const SurfacePoint& p) {
  return pauli_compose(bloch_vector(spec, p));
}

BlochGradients bloch_gradients(const ManifoldSpec& spec, const SurfacePoint& p) {
  const auto [delta, omega] = control_fields(spec, p.theta);
  const double d_delta = -spec.delta1 * std::sin(p.theta);
  const double d_omega = spec.omega1 * std::cos(p.theta);
  const double c = std::cos(p.phi);
  const double s = std::sin(p.phi);

  BlochVector dv_theta;
  BlochVector dv_phi;
  if (spec.kind == ManifoldKind::Sphere) {
    dv_theta = {d_omega * c, d_omega * s, d_delta};
    dv_phi = {-omega * s, omega * c, 0.0};
  } else {
    dv_theta = {d_delta * c, d_delta * s, d_omega};
    dv_phi = {-delta * s, delta * c, 0.0};
  }
  return {dv_theta, dv_phi};
}

HamiltonianGradients hamiltonian_gradients(const ManifoldSpec& spec, const SurfacePoint& p) {
  const BlochGradients g = bloch_gradients(spec, p);
  return {pauli_compose(g.d_theta), pauli_compose(g.d_phi)};
}

double gaussian_curvature(const ManifoldSpec& spec, const SurfacePoint& p) {
  if (spec.kind == ManifoldKind::Sphere) return 1.0 / (spec.omega1 * spec.omega1);
  const double radius = spec.delta2 + spec.delta1 * std::cos(p.theta);
  if (std::abs(radius) <= kGeometricEpsilon) {
    throw GeometricSingularity("torus Gaussian curvature is singular where delta2 + delta1 cos(theta) = 0");
  }
  return std::cos(p.theta) / (spec.delta1 * radius);
}

double area_element_density(const ManifoldSpec& spec, const SurfacePoint& p) {
  if (spec.kind == ManifoldKind::Sphere) return spec.omega1 * spec.omega1 * std::sin(p.theta);
  return spec.delta1 * (spec.delta2 + spec.delta1 * std::cos(p.theta));
}

double curvature_area_product(const ManifoldSpec& spec, const SurfacePoint& p) {
  return spec.kind == ManifoldKind::Sphere ? std::sin(p.theta) : std::cos(p.theta);
}

double euler_characteristic(const ManifoldSpec& spec, int n_theta, int n_phi) {
  if (n_theta < 8 || n_phi < 8) throw InvalidArgument("euler_characteristic needs n >= 8");
  const double h_theta = spec.theta_span() / (n_theta - 1);
  const double h_phi = 2.0 * pi / (n_phi - 1);

  std::vector<double> row(static_cast<std::size_t>(n_phi));
  std::vector<double> column(static_cast<std::size_t>(n_theta));
  for (int i = 0; i < n_theta; ++i) {
    const double theta = h_theta * i;
    for (int j = 0; j < n_phi; ++j) {
      row[static_cast<std::size_t>(j)] = curvature_area_product(spec, {theta, h_phi * j});
    }
    column[static_cast<std::size_t>(i)] = trapezoid_uniform(row, h_phi);
  }
  // The torus integrand is periodic in theta, where the trapezoid rule converges
  // spectrally; Simpson only helps on the sphere's open interval.
  const double integral = spec.kind == ManifoldKind::Torus ? trapezoid_uniform(column, h_theta)
                                                           : simpson_uniform(column, h_theta);
  return integral / (2.0 * pi);
}

double minimum_gap(const ManifoldSpec& spec, int n_theta) {
  if (n_theta < 64) throw InvalidArgument("minimum_gap needs n_theta >= 64");
  const double h = spec.theta_span() / (n_theta - 1);
  double best = bloch_vector(spec, {0.0, 0.0}).norm();
  for (int i = 1; i < n_theta; ++i) {
    best = std::min(best, bloch_vector(spec, {h * i, 0.0}).norm());
  }
  return best;
}

bool touches_degeneracy(const ManifoldSpec& spec, double eps) {
  return std::abs(spec.delta1 + spec.delta2) <= eps || std::abs(spec.delta2 - spec.delta1) <= eps;
}

}  // namespace curvtrack
