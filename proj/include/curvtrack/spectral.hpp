#pragma once

// Geometry of the eigenstate bundle: eigenstates, Berry connection, quantum
// geometric tensor, Berry curvature by three independent routes, and
// conventional Chern numbers.
//
// Sign convention: B = d_theta A_phi - d_phi A_theta with A = i<psi|d psi>.
// For the ground band this makes the delta2 = 0 sphere carry Chern number +1.

#include "curvtrack/manifold.hpp"
#include "curvtrack/quantum_core.hpp"

namespace curvtrack {

enum class Band { Ground, Excited };

/// Level-splitting guard [rad/us].
inline constexpr double kGapEpsilon = 1e-9;

/// Default finite-difference step for eigenstate derivatives [rad].
inline constexpr double kDerivativeStep = 1e-5;

struct QGTensor {
  Complex tt;
  Complex tp;
  Complex pt;
  Complex pp;
};

struct BerryConnection {
  double theta = 0.0;
  double phi = 0.0;
};

struct EigenPair {
  PureState2 excited;
  PureState2 ground;
};

/// Which amplitude is held real positive when comparing neighbouring
/// eigenstates. `Auto` picks the larger-modulus amplitude at the centre point.
enum class GaugeAnchor { Auto, Excited, Ground };

/// Eigenstates of the torus Hamiltonian in the closed form quoted for the
/// (Delta, Omega, phi) controls. When |Delta| < 1e-12 the closed form is 0/0
/// and eig2 takes over. Throws DegeneratePoint when the splitting is below
/// kGapEpsilon.
EigenPair eigenstates_closed_form(double delta, double omega, double phi);

/// Gauge-fixed eigenstate of hamiltonian(spec, p).
PureState2 band_state(const ManifoldSpec& spec, const SurfacePoint& p, Band band);

/// Matrix-element formula with the (E_e - E_g)^2 denominator and analytic
/// Hamiltonian gradients.
double berry_curvature_matrix_element(const ManifoldSpec& spec, const SurfacePoint& p, Band band);

/// Closed-form theta-phi curvature of each family. Excited band is the negation.
double berry_curvature_closed_form(const ManifoldSpec& spec, const SurfacePoint& p, Band band);

/// 1/2 xhat . (d_theta xhat x d_phi xhat) from analytic derivatives of the
/// normalised Bloch vector.
double berry_curvature_bloch(const ManifoldSpec& spec, const SurfacePoint& p, Band band);

/// Quantum geometric tensor from central differences of gauge-aligned
/// eigenstates. -2 Im(tp) is the Berry curvature.
QGTensor qgt_numeric(const ManifoldSpec& spec, const SurfacePoint& p, Band band,
                     double h = kDerivativeStep);

/// A_mu = i<psi|d_mu psi> in the gauge that keeps the anchor amplitude real
/// positive across the stencil. Throws GaugeDiscontinuity when that
/// amplitude drops below 1e-6 anywhere on the stencil.
BerryConnection berry_connection_numeric(const ManifoldSpec& spec, const SurfacePoint& p,
                                         Band band, double h = kDerivativeStep,
                                         GaugeAnchor anchor = GaugeAnchor::Auto);

/// (1/2pi) * integral of the closed-form curvature over the surface.
/// Throws UndefinedChern (sphere) or DegeneratePoint (torus) when the
/// surface touches the degeneracy.
double chern_conventional(const ManifoldSpec& spec, Band band, int n_theta, int n_phi);

/// (sign(d1 - d2) + sign(d1 + d2)) / 2. Throws UndefinedChern at |d1| = |d2|.
double chern_closed_form_sphere(double delta1, double delta2);

}  // namespace curvtrack
