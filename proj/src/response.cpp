#include "curvtrack/response.hpp"

#include <cmath>

#include "curvtrack/errors.hpp"
#include "curvtrack/spectral.hpp"

namespace curvtrack {

DensityMatrix2 prepare(const ManifoldSpec& spec, const RampProtocol& protocol, Preparation prep) {
  return prep == Preparation::BareGround ? prepare_bare_ground() : prepare_ground(spec, protocol);
}

double generalized_force(const DensityMatrix2& rho, const HermitianMatrix2& dh_dphi) {
  return -expectation(rho, dh_dphi);
}

double curvature_prefactor(const ManifoldSpec& spec, double theta) {
  if (spec.kind == ManifoldKind::Sphere) return spec.omega1 * std::sin(theta);
  return spec.delta1 * std::cos(theta) + spec.delta2;
}

CurvatureProfile dynamical_curvature_profile(const ManifoldSpec& spec, const RampProtocol& protocol,
                                             const std::optional<NoiseSpec>& noise, double dt,
                                             Preparation prep) {
  if (protocol.phi_fixed != 0.0) {
    throw InvalidArgument("curvature extraction requires phi fixed at 0");
  }
  const Trajectory traj = evolve(spec, protocol, prepare(spec, protocol, prep), noise, dt);
  const double velocity = protocol.velocity();

  CurvatureProfile profile{{}, spec, protocol};
  profile.points.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    const double b = curvature_prefactor(spec, s.theta) * s.sigma_y_expect / (2.0 * velocity);
    profile.points.push_back({s.t, s.theta, s.sigma_y_expect, b});
  }
  return profile;
}

double dynamical_chern(const CurvatureProfile& profile) {
  const auto& pts = profile.points;
  if (pts.size() < 2) throw IncompleteSweep("profile has fewer than two samples");
  const double covered = std::abs(pts.back().theta - pts.front().theta);
  const double step = std::abs(pts[1].theta - pts[0].theta);
  if (covered < profile.spec.theta_span() - step) {
    throw IncompleteSweep("profile does not cover the full theta period");
  }
  double s = 0.0;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    s += 0.5 * std::abs(pts[k].theta - pts[k - 1].theta) * (pts[k].b_dyn + pts[k - 1].b_dyn);
  }
  return s;
}

std::vector<ConvergencePoint> convergence_study(const ManifoldSpec& spec,
                                                const std::vector<double>& taus,
                                                const TimeStepRule& dt_rule) {
  if (spec.kind != ManifoldKind::Sphere) {
    throw InvalidArgument("convergence_study is defined for sphere specs");
  }
  const double reference = chern_closed_form_sphere(spec.delta1, spec.delta2);
  std::vector<ConvergencePoint> out;
  out.reserve(taus.size());
  for (double tau : taus) {
    const RampProtocol protocol = RampProtocol::full_sweep(spec, tau);
    const CurvatureProfile profile =
        dynamical_curvature_profile(spec, protocol, std::nullopt, dt_rule(spec, protocol));
    const double c = dynamical_chern(profile);
    out.push_back({tau, c, std::abs(c - reference)});
  }
  return out;
}

}  // namespace curvtrack
