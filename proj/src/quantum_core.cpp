#include "curvtrack/quantum_core.hpp"

#include <algorithm>
#include <cmath>

#include "curvtrack/errors.hpp"

namespace curvtrack {

Mat2& Mat2::operator+=(const Mat2& o) {
  for (int k = 0; k < 4; ++k) a[k] += o.a[k];
  return *this;
}

Mat2& Mat2::operator-=(const Mat2& o) {
  for (int k = 0; k < 4; ++k) a[k] -= o.a[k];
  return *this;
}

Mat2& Mat2::operator*=(Complex s) {
  for (auto& v : a) v *= s;
  return *this;
}

Mat2 Mat2::adjoint() const {
  Mat2 r;
  r(0, 0) = std::conj(a[0]);
  r(0, 1) = std::conj(a[2]);
  r(1, 0) = std::conj(a[1]);
  r(1, 1) = std::conj(a[3]);
  return r;
}

double Mat2::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : a) s += std::norm(v);
  return std::sqrt(s);
}

Mat2 operator+(Mat2 x, const Mat2& y) { return x += y; }
Mat2 operator-(Mat2 x, const Mat2& y) { return x -= y; }

Mat2 operator*(const Mat2& x, const Mat2& y) {
  Mat2 r;
  r(0, 0) = x(0, 0) * y(0, 0) + x(0, 1) * y(1, 0);
  r(0, 1) = x(0, 0) * y(0, 1) + x(0, 1) * y(1, 1);
  r(1, 0) = x(1, 0) * y(0, 0) + x(1, 1) * y(1, 0);
  r(1, 1) = x(1, 0) * y(0, 1) + x(1, 1) * y(1, 1);
  return r;
}

Mat2 operator*(Complex s, Mat2 x) { return x *= s; }
Mat2 operator*(double s, Mat2 x) { return x *= Complex(s, 0.0); }

Mat2 identity2() { return Mat2{{1.0, 0.0, 0.0, 1.0}}; }
Mat2 sigma_x() { return Mat2{{0.0, 1.0, 1.0, 0.0}}; }
Mat2 sigma_y() { return Mat2{{0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0}}; }
Mat2 sigma_z() { return Mat2{{1.0, 0.0, 0.0, -1.0}}; }

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

BlochVector operator+(const BlochVector& u, const BlochVector& v) {
  return {u.x + v.x, u.y + v.y, u.z + v.z};
}

BlochVector operator*(double s, const BlochVector& v) { return {s * v.x, s * v.y, s * v.z}; }

// ---------------------------------------------------------------------------

HermitianMatrix2 HermitianMatrix2::from_matrix(const Mat2& m) {
  const double scale = std::max(1.0, m.frobenius_norm());
  const double tol = 1e-12 * scale;
  if (std::abs(m(0, 1) - std::conj(m(1, 0))) > tol || std::abs(m(0, 0).imag()) > tol ||
      std::abs(m(1, 1).imag()) > tol) {
    throw InvalidArgument("matrix is not Hermitian");
  }
  Mat2 h;
  h(0, 0) = m(0, 0).real();
  h(1, 1) = m(1, 1).real();
  h(0, 1) = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
  h(1, 0) = std::conj(h(0, 1));
  return HermitianMatrix2(h);
}

double HermitianMatrix2::norm() const {
  const double mean = 0.5 * (m_(0, 0).real() + m_(1, 1).real());
  const double half_split = 0.5 * (m_(0, 0).real() - m_(1, 1).real());
  const double r = std::hypot(half_split, std::abs(m_(0, 1)));
  return std::abs(mean) + r;
}

// ---------------------------------------------------------------------------

PureState2::PureState2(Complex amp_e, Complex amp_g) : e_(amp_e), g_(amp_g) {
  const double n2 = std::norm(e_) + std::norm(g_);
  if (!std::isfinite(n2) || std::abs(n2 - 1.0) > 1e-9) {
    throw InvalidState("pure state is not normalised");
  }
}

PureState2 PureState2::normalized(Complex amp_e, Complex amp_g) {
  const double n = std::sqrt(std::norm(amp_e) + std::norm(amp_g));
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidState("zero or non-finite amplitude pair");
  return {amp_e / n, amp_g / n};
}

Mat2 PureState2::projector() const {
  Mat2 p;
  p(0, 0) = e_ * std::conj(e_);
  p(0, 1) = e_ * std::conj(g_);
  p(1, 0) = g_ * std::conj(e_);
  p(1, 1) = g_ * std::conj(g_);
  return p;
}

Complex inner(const PureState2& a, const PureState2& b) {
  return std::conj(a.amp_e()) * b.amp_e() + std::conj(a.amp_g()) * b.amp_g();
}

// ---------------------------------------------------------------------------

namespace {

double hermitian_min_eigenvalue(const Mat2& m) {
  const double mean = 0.5 * (m(0, 0).real() + m(1, 1).real());
  const double half_split = 0.5 * (m(0, 0).real() - m(1, 1).real());
  const Complex off = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
  return mean - std::hypot(half_split, std::abs(off));
}

}  // namespace

DensityMatrix2 DensityMatrix2::from_matrix(const Mat2& m) {
  for (const auto& v : m.a) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw InvalidState("density matrix has non-finite entries");
    }
  }
  if (std::abs(m(0, 1) - std::conj(m(1, 0))) > kHermiticityTol ||
      std::abs(m(0, 0).imag()) > kHermiticityTol || std::abs(m(1, 1).imag()) > kHermiticityTol) {
    throw InvalidState("density matrix is not Hermitian");
  }
  if (std::abs(m.trace().real() - 1.0) > kTraceTol) {
    throw InvalidState("density matrix trace differs from 1");
  }
  if (hermitian_min_eigenvalue(m) < -kPositivityTol) {
    throw InvalidState("density matrix has a negative eigenvalue");
  }
  return DensityMatrix2(m);
}

DensityMatrix2 DensityMatrix2::from_pure(const PureState2& psi) {
  return DensityMatrix2(psi.projector());
}

DensityMatrix2 DensityMatrix2::maximally_mixed() { return DensityMatrix2(0.5 * identity2()); }

double DensityMatrix2::purity() const { return (m_ * m_).trace().real(); }

double DensityMatrix2::min_eigenvalue() const { return hermitian_min_eigenvalue(m_); }

// ---------------------------------------------------------------------------

HermitianMatrix2 pauli_compose(const BlochVector& v) {
  Mat2 m;
  m(0, 0) = 0.5 * v.z;
  m(1, 1) = -0.5 * v.z;
  m(0, 1) = Complex(0.5 * v.x, -0.5 * v.y);
  m(1, 0) = Complex(0.5 * v.x, 0.5 * v.y);
  return HermitianMatrix2::from_matrix(m);
}

double expectation(const PureState2& state, const HermitianMatrix2& obs) {
  const Complex e = state.amp_e();
  const Complex g = state.amp_g();
  const Complex v = std::conj(e) * (obs(0, 0) * e + obs(0, 1) * g) +
                    std::conj(g) * (obs(1, 0) * e + obs(1, 1) * g);
  return v.real();
}

double expectation(const DensityMatrix2& state, const HermitianMatrix2& obs) {
  return (state.matrix() * obs.matrix()).trace().real();
}

PureState2 fix_gauge(const PureState2& psi, bool anchor_excited) {
  const Complex anchor = anchor_excited ? psi.amp_e() : psi.amp_g();
  const double mod = std::abs(anchor);
  if (mod == 0.0) return psi;
  const Complex phase = std::conj(anchor) / mod;
  Complex e = psi.amp_e() * phase;
  Complex g = psi.amp_g() * phase;
  if (anchor_excited) {
    e = Complex(std::abs(e), 0.0);
  } else {
    g = Complex(std::abs(g), 0.0);
  }
  return PureState2::normalized(e, g);
}

PureState2 fix_gauge(const PureState2& psi) {
  return fix_gauge(psi, std::abs(psi.amp_e()) >= std::abs(psi.amp_g()));
}

Eigensystem eig2(const HermitianMatrix2& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const Complex c = h(0, 1);
  const double mean = 0.5 * (a + d);
  const double z = 0.5 * (a - d);
  const double r = std::hypot(z, std::abs(c));

  Eigensystem out;
  out.e_ground = mean - r;
  out.e_excited = mean + r;
  if (r == 0.0) return out;

  // For each root pick whichever of the two algebraically equivalent
  // eigenvector forms has the larger norm.
  const PureState2 up = z >= 0.0 ? PureState2::normalized(r + z, std::conj(c))
                                 : PureState2::normalized(c, r - z);
  const PureState2 down = z <= 0.0 ? PureState2::normalized(z - r, std::conj(c))
                                   : PureState2::normalized(-c, r + z);
  out.excited = fix_gauge(up);
  out.ground = fix_gauge(down);
  return out;
}

double fidelity(const DensityMatrix2& rho, const PureState2& target) {
  const Complex e = target.amp_e();
  const Complex g = target.amp_g();
  const Mat2& m = rho.matrix();
  const Complex v = std::conj(e) * (m(0, 0) * e + m(0, 1) * g) +
                    std::conj(g) * (m(1, 0) * e + m(1, 1) * g);
  return std::clamp(v.real(), 0.0, 1.0);
}

}  // namespace curvtrack
