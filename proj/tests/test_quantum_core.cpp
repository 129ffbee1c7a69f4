#include <doctest.h>

#include <cmath>

#include "curvtrack/errors.hpp"
#include "curvtrack/quantum_core.hpp"
#include "support.hpp"

using namespace curvtrack;
using testing::max_abs_diff;

TEST_CASE("pauli_compose builds (x sx + y sy + z sz) / 2") {
  const double d = 1.7;
  const double w = 0.9;
  const double phi = 0.4;
  CHECK(max_abs_diff(pauli_compose({0, 0, d}).matrix(), 0.5 * d * sigma_z()) == 0.0);
  Mat2 sx_case;
  sx_case(0, 1) = sx_case(1, 0) = 0.5 * w;
  CHECK(max_abs_diff(pauli_compose({w, 0, 0}).matrix(), sx_case) == 0.0);

  Mat2 rotating;
  rotating(0, 0) = 0.5 * d;
  rotating(1, 1) = -0.5 * d;
  rotating(0, 1) = 0.5 * w * std::polar(1.0, -phi);
  rotating(1, 0) = 0.5 * w * std::polar(1.0, phi);
  CHECK(max_abs_diff(pauli_compose({w * std::cos(phi), w * std::sin(phi), d}).matrix(), rotating) < 1e-15);
}

TEST_CASE("pauli_compose is linear and traceless") {
  testing::Rng rng(1);
  for (int k = 0; k < 200; ++k) {
    const BlochVector v{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const BlochVector u{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const double a = rng.uniform(-3, 3);
    const double b = rng.uniform(-3, 3);
    const Mat2 lhs = pauli_compose(a * v + b * u).matrix();
    const Mat2 rhs = a * pauli_compose(v).matrix() + b * pauli_compose(u).matrix();
    CHECK(max_abs_diff(lhs, rhs) <= 1e-12);
    CHECK(std::abs(lhs.trace()) <= 1e-15);
  }
}

TEST_CASE("HermitianMatrix2 rejects non-Hermitian input") {
  Mat2 m = sigma_x();
  m(0, 1) = 2.0;
  CHECK_THROWS_AS(HermitianMatrix2::from_matrix(m), InvalidArgument);
  m = sigma_z();
  m(0, 0) = Complex(1.0, 0.1);
  CHECK_THROWS_AS(HermitianMatrix2::from_matrix(m), InvalidArgument);
}

TEST_CASE("state constructors enforce their invariants") {
  CHECK_THROWS_AS(PureState2(1.0, 1.0), InvalidState);
  CHECK_NOTHROW(PureState2(std::sqrt(0.5), Complex(0, std::sqrt(0.5))));
  Mat2 bad = identity2();
  CHECK_THROWS_AS(DensityMatrix2::from_matrix(bad), InvalidState);  // trace 2
  Mat2 neg;
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix2::from_matrix(neg), InvalidState);
  Mat2 skew = 0.5 * identity2();
  skew(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix2::from_matrix(skew), InvalidState);
}

TEST_CASE("expectation values of basis and mixed states") {
  const auto sy = HermitianMatrix2::from_matrix(sigma_y());
  const auto sz = HermitianMatrix2::from_matrix(sigma_z());
  CHECK(expectation(PureState2::ground(), sy) == doctest::Approx(0.0));
  const PureState2 plus_y(std::sqrt(0.5), Complex(0, std::sqrt(0.5)));
  CHECK(expectation(plus_y, sy) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(expectation(DensityMatrix2::maximally_mixed(), sz) == doctest::Approx(0.0));
  CHECK(expectation(DensityMatrix2::from_pure(plus_y), sy) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("eig2 on diagonal and off-diagonal Hamiltonians") {
  const double d = 2.3;
  const Eigensystem z = eig2(pauli_compose({0, 0, d}));
  CHECK(z.e_excited == doctest::Approx(d / 2));
  CHECK(z.e_ground == doctest::Approx(-d / 2));
  CHECK(z.excited == PureState2::excited());
  CHECK(z.ground == PureState2::ground());

  // Delta = 0, Omega > 0 in the torus family: H = Omega/2 sigma_z.
  const Eigensystem t = eig2(pauli_compose({0, 0, 1.1}));
  CHECK(t.excited == PureState2::excited());
  CHECK(t.ground == PureState2::ground());

  // Delta = Omega = c on the sphere, phi = 0: gap c sqrt(2).
  const double c = 1.3;
  const HermitianMatrix2 h = pauli_compose({c, 0, c});
  const auto ref = testing::reference_eigenvalues(h.matrix());
  CHECK(eig2(h).gap() == doctest::Approx(ref(1) - ref(0)).epsilon(1e-14));
  CHECK(eig2(h).gap() == doctest::Approx(c * std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("eig2 reconstructs random Hermitian matrices") {
  testing::Rng rng(2);
  for (int k = 0; k < 1000; ++k) {
    Mat2 m;
    m(0, 0) = rng.uniform(-4, 4);
    m(1, 1) = rng.uniform(-4, 4);
    m(0, 1) = rng.complex(4);
    m(1, 0) = std::conj(m(0, 1));
    const HermitianMatrix2 h = HermitianMatrix2::from_matrix(m);
    const Eigensystem es = eig2(h);
    const Mat2 rebuilt = es.e_ground * es.ground.projector() + es.e_excited * es.excited.projector();
    CHECK(max_abs_diff(rebuilt, m) <= 1e-10 * h.norm());
    CHECK(es.e_ground <= es.e_excited);

    const auto ref = testing::reference_eigenvalues(m);
    CHECK(std::abs(es.e_ground - ref(0)) <= 1e-12 * h.norm());
    CHECK(std::abs(es.e_excited - ref(1)) <= 1e-12 * h.norm());

    // H psi = E psi
    for (const auto& [e, psi] : {std::pair{es.e_ground, es.ground}, std::pair{es.e_excited, es.excited}}) {
      const Complex r0 = m(0, 0) * psi.amp_e() + m(0, 1) * psi.amp_g() - e * psi.amp_e();
      const Complex r1 = m(1, 0) * psi.amp_e() + m(1, 1) * psi.amp_g() - e * psi.amp_g();
      CHECK(std::abs(r0) + std::abs(r1) <= 1e-10 * h.norm());
    }
  }
}

TEST_CASE("eig2 gauge: largest amplitude real positive, ties to amp_e, repeatable") {
  testing::Rng rng(3);
  for (int k = 0; k < 500; ++k) {
    const BlochVector v{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const Eigensystem a = eig2(pauli_compose(v));
    const Eigensystem b = eig2(pauli_compose(v));
    CHECK(a.ground == b.ground);
    CHECK(a.excited == b.excited);
    for (const PureState2& psi : {a.ground, a.excited}) {
      const bool e_anchor = std::abs(psi.amp_e()) >= std::abs(psi.amp_g());
      const Complex anchor = e_anchor ? psi.amp_e() : psi.amp_g();
      CHECK(anchor.imag() == 0.0);
      CHECK(anchor.real() > 0.0);
    }
  }
  // Exact tie: H = sigma_x / 2 has |amp_e| = |amp_g|.
  const Eigensystem tie = eig2(pauli_compose({1, 0, 0}));
  CHECK(tie.ground.amp_e().imag() == 0.0);
  CHECK(tie.ground.amp_e().real() > 0.0);
  CHECK(tie.excited.amp_e().real() > 0.0);
}

TEST_CASE("eig2 flags degenerate input with a zero gap") {
  const Eigensystem es = eig2(HermitianMatrix2::from_matrix(0.7 * identity2()));
  CHECK(es.gap() == 0.0);
  CHECK(std::abs(inner(es.ground, es.excited)) == 0.0);
}

TEST_CASE("fidelity values and clamping") {
  const auto g = DensityMatrix2::from_pure(PureState2::ground());
  CHECK(fidelity(g, PureState2::ground()) == 1.0);
  CHECK(fidelity(g, PureState2::excited()) == 0.0);
  const PureState2 any = PureState2::normalized(Complex(0.3, 0.2), Complex(-0.5, 0.9));
  CHECK(fidelity(DensityMatrix2::maximally_mixed(), any) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("fidelity equals the projector expectation") {
  testing::Rng rng(4);
  for (int k = 0; k < 300; ++k) {
    const PureState2 psi = PureState2::normalized(rng.complex(1), rng.complex(1));
    const PureState2 chi = PureState2::normalized(rng.complex(1), rng.complex(1));
    const double p = rng.uniform(0, 1);
    const Mat2 m = p * psi.projector() + (1 - p) * chi.projector();
    const auto rho = DensityMatrix2::from_matrix(m);
    const PureState2 target = PureState2::normalized(rng.complex(1), rng.complex(1));
    const double via_expect = expectation(rho, HermitianMatrix2::from_matrix(target.projector()));
    CHECK(std::abs(fidelity(rho, target) - via_expect) <= 1e-12);
  }
}
