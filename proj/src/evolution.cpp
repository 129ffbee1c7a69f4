#include "curvtrack/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "curvtrack/errors.hpp"

namespace curvtrack {

RampProtocol RampProtocol::make(double theta_start, double theta_end, double tau, double phi_fixed) {
  if (!std::isfinite(theta_start) || !std::isfinite(theta_end) || !std::isfinite(phi_fixed)) {
    throw InvalidArgument("ramp angles must be finite");
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("ramp duration must be positive");
  if (theta_end == theta_start) throw InvalidArgument("ramp must change theta");
  return {theta_start, theta_end, tau, phi_fixed};
}

RampProtocol RampProtocol::full_sweep(const ManifoldSpec& spec, double tau) {
  return make(0.0, spec.theta_span(), tau, 0.0);
}

double RampProtocol::velocity() const { return std::abs(theta_end - theta_start) / tau; }

double RampProtocol::theta_at(double t) const {
  return theta_start + (theta_end - theta_start) * (t / tau);
}

double RampProtocol::span() const { return std::abs(theta_end - theta_start); }

NoiseSpec NoiseSpec::make(double t1, double t2_star, bool literal_sigma_minus) {
  if (!(t1 > 0.0)) throw InvalidArgument("T1 must be positive");
  if (!(t2_star > 0.0)) throw InvalidArgument("T2* must be positive");
  if (t2_star > 2.0 * t1) throw InvalidArgument("T2* must not exceed 2 T1");
  return {t1, t2_star, literal_sigma_minus};
}

double dephasing_rate(const NoiseSpec& noise) {
  return std::max(0.0, 1.0 / noise.t2_star - 1.0 / (2.0 * noise.t1));
}

DensityMatrix2 prepare_ground(const ManifoldSpec& spec, const RampProtocol& protocol) {
  const Eigensystem es = eig2(hamiltonian(spec, {protocol.theta_start, protocol.phi_fixed}));
  if (!(es.gap() > 1e-9)) throw DegeneratePoint("ramp starts at a degenerate point");
  return DensityMatrix2::from_pure(es.ground);
}

DensityMatrix2 prepare_bare_ground() { return DensityMatrix2::from_pure(PureState2::ground()); }

double max_hamiltonian_norm(const ManifoldSpec& spec, const RampProtocol& protocol) {
  constexpr int kSamples = 4096;
  double best = 0.0;
  for (int k = 0; k <= kSamples; ++k) {
    const double theta = protocol.theta_at(protocol.tau * k / kSamples);
    best = std::max(best, 0.5 * bloch_vector(spec, {theta, protocol.phi_fixed}).norm());
  }
  return best;
}

double default_time_step(const ManifoldSpec& spec, const RampProtocol& protocol) {
  const double by_duration = protocol.tau / 2000.0;
  const double hmax = max_hamiltonian_norm(spec, protocol);
  return hmax > 0.0 ? std::min(by_duration, 0.01 / hmax) : by_duration;
}

namespace {

struct Dissipator {
  Mat2 jump;
  double rate = 0.0;
  Mat2 jump_dag;
  Mat2 jump_dag_jump;
};

Dissipator make_dissipator(const Mat2& jump, double rate) {
  const Mat2 dag = jump.adjoint();
  return {jump, rate, dag, dag * jump};
}

class MasterEquation {
 public:
  MasterEquation(const ManifoldSpec& spec, const RampProtocol& protocol,
                 const std::optional<NoiseSpec>& noise)
      : spec_(spec), protocol_(protocol) {
    if (noise) {
      Mat2 lowering;  // |g><e|
      lowering(1, 0) = noise->literal_sigma_minus ? 2.0 : 1.0;
      channels_.push_back(make_dissipator(lowering, 1.0 / noise->t1));
      const double gamma_phi = dephasing_rate(*noise);
      if (gamma_phi > 0.0) channels_.push_back(make_dissipator(sigma_z(), 0.5 * gamma_phi));
    }
  }

  Mat2 hamiltonian_at(double t) const {
    return hamiltonian(spec_, {protocol_.theta_at(t), protocol_.phi_fixed}).matrix();
  }

  Mat2 rhs(double t, const Mat2& rho) const {
    const Mat2 h = hamiltonian_at(t);
    Mat2 out = Complex(0.0, 1.0) * (rho * h - h * rho);
    for (const auto& ch : channels_) {
      Mat2 d = ch.jump * rho * ch.jump_dag;
      d -= 0.5 * (ch.jump_dag_jump * rho + rho * ch.jump_dag_jump);
      out += ch.rate * d;
    }
    return out;
  }

 private:
  ManifoldSpec spec_;
  RampProtocol protocol_;
  std::vector<Dissipator> channels_;
};

TrajectorySample make_sample(double t, double theta, const Mat2& rho) {
  TrajectorySample s;
  s.t = t;
  s.theta = theta;
  s.rho = DensityMatrix2::from_matrix(rho);
  s.sigma_y_expect = (rho * sigma_y()).trace().real();
  return s;
}

Trajectory integrate(const ManifoldSpec& spec, const RampProtocol& protocol,
                     const DensityMatrix2& rho0, const std::optional<NoiseSpec>& noise, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive");
  if (dt > protocol.tau) throw InvalidArgument("time step exceeds the ramp duration");
  const auto steps = static_cast<long>(std::ceil(protocol.tau / dt * (1.0 - 1e-12)));
  const double h = protocol.tau / static_cast<double>(steps);
  if (max_hamiltonian_norm(spec, protocol) * h > kMaxPhasePerStep) {
    throw StepTooLarge("max ||H|| * dt exceeds 0.1 rad");
  }

  const MasterEquation eq(spec, protocol, noise);
  Trajectory traj{{}, protocol, spec};
  traj.samples.reserve(static_cast<std::size_t>(steps) + 1);

  Mat2 rho = rho0.matrix();
  traj.samples.push_back(make_sample(0.0, protocol.theta_start, rho));
  for (long k = 0; k < steps; ++k) {
    const double t = h * static_cast<double>(k);
    const Mat2 k1 = eq.rhs(t, rho);
    const Mat2 k2 = eq.rhs(t + 0.5 * h, rho + (0.5 * h) * k1);
    const Mat2 k3 = eq.rhs(t + 0.5 * h, rho + (0.5 * h) * k2);
    const Mat2 k4 = eq.rhs(t + h, rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double t_next = k + 1 == steps ? protocol.tau : h * static_cast<double>(k + 1);
    traj.samples.push_back(make_sample(t_next, protocol.theta_at(t_next), rho));
  }
  return traj;
}

}  // namespace

Trajectory evolve_closed(const ManifoldSpec& spec, const RampProtocol& protocol,
                         const DensityMatrix2& rho0, double dt) {
  return integrate(spec, protocol, rho0, std::nullopt, dt);
}

Trajectory evolve_lindblad(const ManifoldSpec& spec, const RampProtocol& protocol,
                           const DensityMatrix2& rho0, const NoiseSpec& noise, double dt) {
  return integrate(spec, protocol, rho0, noise, dt);
}

Trajectory evolve(const ManifoldSpec& spec, const RampProtocol& protocol,
                  const DensityMatrix2& rho0, const std::optional<NoiseSpec>& noise, double dt) {
  return integrate(spec, protocol, rho0, noise, dt);
}

std::vector<std::pair<double, double>> sigma_y_profile(const Trajectory& traj) {
  std::vector<std::pair<double, double>> out;
  out.reserve(traj.samples.size());
  for (const auto& s : traj.samples) out.emplace_back(s.theta, s.sigma_y_expect);
  return out;
}

}  // namespace curvtrack
