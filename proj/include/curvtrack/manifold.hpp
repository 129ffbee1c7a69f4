#pragma once

// Sphere- and torus-shaped Hamiltonian families over the angles (theta, phi).
//
// Both families share the control schedule
//   Delta(theta) = delta1 cos(theta) + delta2,   Omega(theta) = omega1 sin(theta)
// and differ in which Pauli axis carries which control:
//   sphere: (Omega cos phi, Omega sin phi, Delta)
//   torus:  (Delta cos phi, Delta sin phi, Omega)
// All frequencies are angular, in rad/us.

#include <string_view>

#include "curvtrack/quantum_core.hpp"

namespace curvtrack {

enum class ManifoldKind { Sphere, Torus };

std::string_view to_string(ManifoldKind kind);

struct ManifoldSpec {
  ManifoldKind kind = ManifoldKind::Sphere;
  double delta1 = 1.0;
  double delta2 = 0.0;
  double omega1 = 1.0;

  /// Checked constructor: delta1 > 0, omega1 > 0, all finite.
  static ManifoldSpec make(ManifoldKind kind, double delta1, double delta2, double omega1);

  /// Full theta period of the closed surface: pi (sphere) or 2 pi (torus).
  double theta_span() const;

  friend bool operator==(const ManifoldSpec&, const ManifoldSpec&) = default;
};

struct SurfacePoint {
  double theta = 0.0;
  double phi = 0.0;
};

struct ControlFields {
  double delta = 0.0;
  double omega = 0.0;
};

/// Singularity guard for the torus Gaussian curvature denominator [rad/us].
inline constexpr double kGeometricEpsilon = 1e-9;

ControlFields control_fields(const ManifoldSpec& spec, double theta);

BlochVector bloch_vector(const ManifoldSpec& spec, const SurfacePoint& p);

HermitianMatrix2 hamiltonian(const ManifoldSpec& spec, const SurfacePoint& p);

struct BlochGradients {
  BlochVector d_theta;
  BlochVector d_phi;
};

/// Analytic partial derivatives of bloch_vector().
BlochGradients bloch_gradients(const ManifoldSpec& spec, const SurfacePoint& p);

struct HamiltonianGradients {
  HermitianMatrix2 d_theta;
  HermitianMatrix2 d_phi;
};

/// Analytic partial derivatives of hamiltonian() in theta and phi.
HamiltonianGradients hamiltonian_gradients(const ManifoldSpec& spec, const SurfacePoint& p);

/// Gaussian curvature of the embedded surface. Throws GeometricSingularity
/// where the torus denominator delta1 (delta2 + delta1 cos theta) vanishes.
double gaussian_curvature(const ManifoldSpec& spec, const SurfacePoint& p);

/// Signed area density: omega1^2 sin(theta) (sphere) or
/// delta1 (delta2 + delta1 cos theta) (torus, negative on the inner sheet).
double area_element_density(const ManifoldSpec& spec, const SurfacePoint& p);

/// K * dsigma with the torus denominator cancelled analytically:
/// sin(theta) for the sphere, cos(theta) for the torus.
double curvature_area_product(const ManifoldSpec& spec, const SurfacePoint& p);

/// (1/2pi) * integral of K dsigma over the closed surface. n_theta, n_phi >= 8.
double euler_characteristic(const ManifoldSpec& spec, int n_theta, int n_phi);

/// Minimum of |bloch_vector| over n_theta samples of the theta period
/// (the endpoints included). n_theta >= 64.
double minimum_gap(const ManifoldSpec& spec, int n_theta);

/// True when the surface passes within eps of Delta = Omega = 0. Since
/// Omega vanishes only at sin(theta) = 0, checking theta = 0 and pi is exact.
bool touches_degeneracy(const ManifoldSpec& spec, double eps);

}  // namespace curvtrack
