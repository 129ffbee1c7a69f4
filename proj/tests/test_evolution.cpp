#include <doctest.h>

#include <cmath>

#include "curvtrack/errors.hpp"
#include "curvtrack/evolution.hpp"
#include "curvtrack/spectral.hpp"
#include "support.hpp"

using namespace curvtrack;
using testing::kPi;
using testing::max_abs_diff;

namespace {

ManifoldSpec sphere(double d1, double d2, double o1) { return ManifoldSpec::make(ManifoldKind::Sphere, d1, d2, o1); }
ManifoldSpec torus(double d1, double d2, double o1) { return ManifoldSpec::make(ManifoldKind::Torus, d1, d2, o1); }

// H = 0 along any ramp.
const ManifoldSpec kIdle{ManifoldKind::Torus, 0.0, 0.0, 0.0};

}  // namespace

TEST_CASE("protocol and noise validation") {
  CHECK_THROWS_AS(RampProtocol::make(0, 1, 0.0), InvalidArgument);
  CHECK_THROWS_AS(RampProtocol::make(1, 1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(NoiseSpec::make(10, 25), InvalidArgument);
  CHECK_THROWS_AS(NoiseSpec::make(-1, 1), InvalidArgument);
  const auto r = RampProtocol::make(0, 2 * kPi, 4.0);
  CHECK(r.velocity() == doctest::Approx(kPi / 2));
  CHECK(r.theta_at(2.0) == doctest::Approx(kPi));
}

TEST_CASE("dephasing rate") {
  CHECK(dephasing_rate(NoiseSpec::make(60, 40)) == doctest::Approx(1.0 / 60.0).epsilon(1e-14));
  CHECK(dephasing_rate(NoiseSpec::make(1e12, 7.0)) == doctest::Approx(1.0 / 7.0).epsilon(1e-10));
  CHECK(dephasing_rate(NoiseSpec::make(5.0, 10.0)) == 0.0);
}

TEST_CASE("ground-state preparation") {
  const auto s = sphere(1.0, 0.0, 1.0);
  const auto rho = prepare_ground(s, RampProtocol::full_sweep(s, 1.0));
  CHECK(max_abs_diff(rho.matrix(), PureState2::ground().projector()) < 1e-15);

  const auto t = torus(1.0, 2.0, 1.0);
  const auto rt = prepare_ground(t, RampProtocol::full_sweep(t, 1.0));
  Mat2 minus;  // (|e> - |g>)/sqrt2 projector
  minus(0, 0) = minus(1, 1) = 0.5;
  minus(0, 1) = minus(1, 0) = -0.5;
  CHECK(max_abs_diff(rt.matrix(), minus) < 1e-14);
  CHECK(std::abs(rt.purity() - 1.0) <= 1e-12);

  const auto touch = torus(1.0, -1.0, 1.0);
  CHECK_THROWS_AS(prepare_ground(touch, RampProtocol::full_sweep(touch, 1.0)), DegeneratePoint);
}

TEST_CASE("trajectory sample grid") {
  const auto s = sphere(2.0, 0.3, 1.5);
  const auto p = RampProtocol::full_sweep(s, 1.0);
  const Trajectory tr = evolve_closed(s, p, prepare_ground(s, p), 0.0013);
  CHECK(tr.samples.front().t == 0.0);
  CHECK(tr.samples.back().t == 1.0);
  CHECK(tr.samples.back().theta == doctest::Approx(kPi));
  for (std::size_t k = 1; k < tr.samples.size(); ++k) REQUIRE(tr.samples[k].t > tr.samples[k - 1].t);
}

TEST_CASE("constant sigma_x drive gives Rabi oscillation") {
  const double d2 = 3.0;
  const ManifoldSpec rabi{ManifoldKind::Torus, 0.0, d2, 0.0};
  const auto p = RampProtocol::make(0, 2 * kPi, 5.0);
  const Trajectory tr = evolve_closed(rabi, p, prepare_bare_ground(), default_time_step(rabi, p));
  const auto sz = HermitianMatrix2::from_matrix(sigma_z());
  double worst = 0.0;
  for (const auto& s : tr.samples) worst = std::max(worst, std::abs(expectation(s.rho, sz) + std::cos(d2 * s.t)));
  CHECK(worst <= 1e-6);
}

TEST_CASE("zero Hamiltonian leaves the state unchanged") {
  const auto p = RampProtocol::make(0, 1, 3.0);
  const auto rho0 = DensityMatrix2::from_pure(PureState2::normalized(Complex(0.6, 0.1), Complex(-0.2, 0.7)));
  const Trajectory tr = evolve_closed(kIdle, p, rho0, 0.01);
  for (const auto& s : tr.samples) REQUIRE(max_abs_diff(s.rho.matrix(), rho0.matrix()) == 0.0);
}

TEST_CASE("slow ramp follows the instantaneous ground state") {
  const double d1 = 2.0;
  const auto s = sphere(d1, 0.0, d1);
  const auto p = RampProtocol::full_sweep(s, 100.0 / d1);
  const Trajectory tr = evolve_closed(s, p, prepare_ground(s, p), default_time_step(s, p));
  const auto target = eig2(hamiltonian(s, {p.theta_end, 0.0})).ground;
  CHECK(fidelity(tr.samples.back().rho, target) > 0.999);
}

TEST_CASE("step size guard") {
  const auto s = sphere(10.0, 0.0, 10.0);
  const auto p = RampProtocol::full_sweep(s, 1.0);
  CHECK_THROWS_AS(evolve_closed(s, p, prepare_ground(s, p), 0.05), StepTooLarge);
  CHECK_THROWS_AS(evolve_closed(s, p, prepare_ground(s, p), 2.0), InvalidArgument);
  CHECK_NOTHROW(evolve_closed(s, p, prepare_ground(s, p), 0.009));
}

TEST_CASE("amplitude damping and dephasing at H = 0") {
  const auto noise = NoiseSpec::make(60.0, 40.0);
  const auto p = RampProtocol::make(0, 1, 120.0);
  const double dt = default_time_step(kIdle, p);
  const Trajectory decay = evolve_lindblad(kIdle, p, DensityMatrix2::from_pure(PureState2::excited()), noise, dt);
  for (const auto& s : decay.samples) REQUIRE(std::abs(s.rho(0, 0).real() - std::exp(-s.t / 60.0)) <= 1e-6);
  const double h = std::sqrt(0.5);
  const Trajectory coh = evolve_lindblad(kIdle, p, DensityMatrix2::from_pure(PureState2(h, h)), noise, dt);
  for (const auto& s : coh.samples) REQUIRE(std::abs(std::abs(s.rho(0, 1)) - 0.5 * std::exp(-s.t / 40.0)) <= 1e-6);
}

TEST_CASE("literal lowering operator quadruples the relaxation rate") {
  const auto noise = NoiseSpec::make(60.0, 40.0, true);
  const auto p = RampProtocol::make(0, 1, 30.0);
  const Trajectory tr =
      evolve_lindblad(kIdle, p, DensityMatrix2::from_pure(PureState2::excited()), noise, default_time_step(kIdle, p));
  CHECK(tr.samples.back().rho(0, 0).real() == doctest::Approx(std::exp(-4.0 * 30.0 / 60.0)).epsilon(1e-8));
}

TEST_CASE("vanishing noise rates reproduce closed evolution") {
  const auto s = torus(2.0, 0.7, 1.5);
  const auto p = RampProtocol::full_sweep(s, 1.0);
  const auto rho0 = prepare_ground(s, p);
  const double dt = default_time_step(s, p);
  const auto closed = evolve_closed(s, p, rho0, dt);
  const auto open = evolve_lindblad(s, p, rho0, NoiseSpec::make(1e15, 1e15), dt);
  CHECK(max_abs_diff(closed.samples.back().rho.matrix(), open.samples.back().rho.matrix()) <= 1e-9);
}

TEST_CASE("trace, Hermiticity and purity over random runs") {
  testing::Rng rng(30);
  for (int k = 0; k < 100; ++k) {
    const auto kind = k % 2 ? ManifoldKind::Torus : ManifoldKind::Sphere;
    const auto s = rng.spec(kind);
    const auto p = RampProtocol::make(rng.uniform(0, 1), rng.uniform(2, 6), rng.uniform(0.5, 3.0));
    const auto rho0 = DensityMatrix2::from_pure(PureState2::normalized(rng.complex(1), rng.complex(1)));
    const bool noisy = k % 3 == 0;
    const auto tr = noisy ? evolve_lindblad(s, p, rho0, NoiseSpec::make(rng.uniform(5, 60), rng.uniform(5, 10)),
                                            default_time_step(s, p))
                          : evolve_closed(s, p, rho0, default_time_step(s, p));
    for (const auto& smp : tr.samples) {
      const Mat2& m = smp.rho.matrix();
      REQUIRE(std::abs(m.trace().real() - 1.0) < 1e-9);
      REQUIRE(std::abs(m(0, 1) - std::conj(m(1, 0))) <= 1e-10);
      REQUIRE(smp.rho.min_eigenvalue() >= -1e-8);
      if (!noisy) REQUIRE((smp.rho.purity() >= 1 - 1e-7 && smp.rho.purity() <= 1 + 1e-9));
    }
  }
}

TEST_CASE("RK4 step halving") {
  const auto s = torus(testing::kMhz, 0.5 * testing::kMhz, testing::kMhz);
  const auto p = RampProtocol::full_sweep(s, 1.0);
  const auto rho0 = prepare_ground(s, p);
  const double dt = default_time_step(s, p);
  const Mat2 a = evolve_closed(s, p, rho0, dt).samples.back().rho.matrix();
  const Mat2 b = evolve_closed(s, p, rho0, dt / 2).samples.back().rho.matrix();
  CHECK((a - b).frobenius_norm() < 1e-6);

  const double coarse = 0.08 / max_hamiltonian_norm(s, p);
  const Mat2 c0 = evolve_closed(s, p, rho0, coarse).samples.back().rho.matrix();
  const Mat2 c1 = evolve_closed(s, p, rho0, coarse / 2).samples.back().rho.matrix();
  const Mat2 c2 = evolve_closed(s, p, rho0, coarse / 4).samples.back().rho.matrix();
  const double ratio = (c0 - c1).frobenius_norm() / (c1 - c2).frobenius_norm();
  CHECK(ratio == doctest::Approx(16.0).epsilon(0.25));
}

TEST_CASE("relaxation at H = 0 is monotone") {
  const auto p = RampProtocol::make(0, 1, 50.0);
  const auto rho0 = DensityMatrix2::from_pure(PureState2::normalized(Complex(0.8, 0.1), Complex(0.3, -0.5)));
  const auto tr = evolve_lindblad(kIdle, p, rho0, NoiseSpec::make(20.0, 15.0), 0.05);
  for (std::size_t k = 1; k < tr.samples.size(); ++k) {
    const auto& a = tr.samples[k - 1].rho;
    const auto& b = tr.samples[k].rho;
    REQUIRE(b(1, 1).real() >= a(1, 1).real() - 1e-12);
    REQUIRE(std::abs(b(0, 1)) <= std::abs(a(0, 1)) + 1e-12);
  }
}

TEST_CASE("sigma_y profile") {
  const double w = testing::kMhz;
  const auto s = sphere(w, 0.0, w);
  const auto p = RampProtocol::full_sweep(s, 16.0);
  const auto tr = evolve_closed(s, p, prepare_ground(s, p), default_time_step(s, p));
  const auto prof = sigma_y_profile(tr);
  REQUIRE(prof.size() == tr.samples.size());
  CHECK(prof.front().second == doctest::Approx(0.0));
  double mean = 0.0;
  for (const auto& [theta, sy] : prof) {
    REQUIRE(std::abs(sy) <= 1.0);
    mean += sy;
  }
  mean /= static_cast<double>(prof.size());
  // linear response: <sigma_y> = 2 v B / (omega1 sin theta) = v / omega1 here
  CHECK(mean > 0.0);
  CHECK(mean == doctest::Approx(p.velocity() / w).epsilon(0.05));
}
