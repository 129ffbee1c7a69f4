#pragma once

// Time evolution of the driven qubit along a linear theta ramp:
//   theta(t) = theta_start + (theta_end - theta_start) t / tau,  phi fixed.
// Both closed and open dynamics propagate the density matrix with
// fixed-step classical RK4 on
//   drho/dt = i[rho, H(t)] + (1/T1) D[L_relax] rho + (1/(2 T_phi)) D[sigma_z] rho.

#include <optional>
#include <utility>
#include <vector>

#include "curvtrack/manifold.hpp"
#include "curvtrack/quantum_core.hpp"

namespace curvtrack {

struct RampProtocol {
  double theta_start = 0.0;
  double theta_end = 0.0;
  double tau = 1.0;  // us
  double phi_fixed = 0.0;

  /// Checked constructor: tau > 0 and theta_end != theta_start.
  static RampProtocol make(double theta_start, double theta_end, double tau, double phi_fixed = 0.0);

  /// Full sweep of the surface's theta period starting at 0.
  static RampProtocol full_sweep(const ManifoldSpec& spec, double tau);

  /// |theta_end - theta_start| / tau [rad/us].
  double velocity() const;
  double theta_at(double t) const;
  double span() const;

  friend bool operator==(const RampProtocol&, const RampProtocol&) = default;
};

struct NoiseSpec {
  double t1 = 0.0;       // us
  double t2_star = 0.0;  // us
  /// Use sigma_- = sigma_x - i sigma_y (= 2|g><e|) for the relaxation
  /// channel instead of |g><e|. Off by default: with it on, T1 no longer
  /// equals the population decay time.
  bool literal_sigma_minus = false;

  /// Checked constructor: t1 > 0 and 0 < t2_star <= 2 t1.
  static NoiseSpec make(double t1, double t2_star, bool literal_sigma_minus = false);
};

/// 1/T_phi = 1/T2* - 1/(2 T1) [1/us].
double dephasing_rate(const NoiseSpec& noise);

struct TrajectorySample {
  double t = 0.0;
  double theta = 0.0;
  DensityMatrix2 rho = DensityMatrix2::maximally_mixed();
  double sigma_y_expect = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  RampProtocol protocol;
  ManifoldSpec spec;
};

/// |psi_g><psi_g| of the Hamiltonian at (theta_start, phi_fixed).
/// Throws DegeneratePoint when the starting point is gapless.
DensityMatrix2 prepare_ground(const ManifoldSpec& spec, const RampProtocol& protocol);

/// The bare qubit ground state |g><g|, independent of the Hamiltonian.
DensityMatrix2 prepare_bare_ground();

/// Largest operator norm of H(theta) over the ramp [rad/us].
double max_hamiltonian_norm(const ManifoldSpec& spec, const RampProtocol& protocol);

/// min(tau / 2000, 0.01 / max ||H||).
double default_time_step(const ManifoldSpec& spec, const RampProtocol& protocol);

/// Hard limit on max ||H|| * dt.
inline constexpr double kMaxPhasePerStep = 0.1;

/// Closed-system propagation. The step is shrunk to tau / ceil(tau / dt) so
/// the last sample lands on tau. Throws StepTooLarge when
/// max ||H|| * dt > kMaxPhasePerStep, InvalidArgument when dt > tau.
Trajectory evolve_closed(const ManifoldSpec& spec, const RampProtocol& protocol,
                         const DensityMatrix2& rho0, double dt);

Trajectory evolve_lindblad(const ManifoldSpec& spec, const RampProtocol& protocol,
                           const DensityMatrix2& rho0, const NoiseSpec& noise, double dt);

/// Dispatches to evolve_lindblad when noise is present.
Trajectory evolve(const ManifoldSpec& spec, const RampProtocol& protocol,
                  const DensityMatrix2& rho0, const std::optional<NoiseSpec>& noise, double dt);

/// (theta, <sigma_y>) per sample.
std::vector<std::pair<double, double>> sigma_y_profile(const Trajectory& traj);

}  // namespace curvtrack
