#pragma once

// Berry curvature from the non-adiabatic linear response along a theta ramp.
//
// While theta is ramped at constant velocity v the phi-force picks up a
// term linear in v, so to leading order
//   B(theta) = <d_phi H> / v = prefactor(theta) <sigma_y> / (2 v)
// at phi = 0, with prefactor omega1 sin(theta) (sphere) or
// delta1 cos(theta) + delta2 (torus). Integrating B over the sweep gives the
// dynamical Chern number, which is not quantised in general.

#include <functional>
#include <optional>
#include <vector>

#include "curvtrack/evolution.hpp"
#include "curvtrack/manifold.hpp"

namespace curvtrack {

/// Initial state of a measurement ramp.
enum class Preparation {
  EigenGround,  ///< instantaneous ground eigenstate at theta_start
  BareGround,   ///< bare qubit ground state |g>
};

DensityMatrix2 prepare(const ManifoldSpec& spec, const RampProtocol& protocol, Preparation prep);

struct CurvaturePoint {
  double t = 0.0;
  double theta = 0.0;
  double sigma_y = 0.0;
  double b_dyn = 0.0;
};

struct CurvatureProfile {
  std::vector<CurvaturePoint> points;
  ManifoldSpec spec;
  RampProtocol protocol;
};

/// F_phi = -Tr(rho dH/dphi).
double generalized_force(const DensityMatrix2& rho, const HermitianMatrix2& dh_dphi);

/// omega1 sin(theta) for the sphere, delta1 cos(theta) + delta2 for the torus.
double curvature_prefactor(const ManifoldSpec& spec, double theta);

/// Runs the ramp and maps every sample through prefactor * <sigma_y> / (2 v).
/// Requires phi_fixed == 0 (InvalidArgument otherwise).
CurvatureProfile dynamical_curvature_profile(const ManifoldSpec& spec, const RampProtocol& protocol,
                                             const std::optional<NoiseSpec>& noise, double dt,
                                             Preparation prep = Preparation::EigenGround);

/// Trapezoid integral of b_dyn over theta. Throws IncompleteSweep unless the
/// profile covers the surface's theta period (within one step).
double dynamical_chern(const CurvatureProfile& profile);

struct ConvergencePoint {
  double tau = 0.0;
  double chern_dyn = 0.0;
  double chern_error = 0.0;
};

using TimeStepRule = std::function<double(const ManifoldSpec&, const RampProtocol&)>;

/// |dynamical_chern - chern_closed_form_sphere| for full sphere sweeps of
/// each duration. Sphere specs only.
std::vector<ConvergencePoint> convergence_study(const ManifoldSpec& spec,
                                                const std::vector<double>& taus,
                                                const TimeStepRule& dt_rule = default_time_step);

}  // namespace curvtrack
