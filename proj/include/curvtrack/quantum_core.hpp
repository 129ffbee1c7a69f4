#pragma once

// Exact 2x2 complex linear algebra for a single qubit.
//
// Basis order everywhere is (|e>, |g>): |e> = (1,0)^T, |g> = (0,1)^T, so
// sigma_z = diag(+1, -1) and <sigma_z> = +1 means fully excited.

#include <array>
#include <complex>

namespace curvtrack {

using Complex = std::complex<double>;

/// Plain 2x2 complex matrix, row-major. No invariants.
struct Mat2 {
  std::array<Complex, 4> a{};

  constexpr Complex& operator()(int r, int c) { return a[2 * r + c]; }
  constexpr const Complex& operator()(int r, int c) const { return a[2 * r + c]; }

  Mat2& operator+=(const Mat2& o);
  Mat2& operator-=(const Mat2& o);
  Mat2& operator*=(Complex s);

  Mat2 adjoint() const;
  Complex trace() const { return a[0] + a[3]; }
  double frobenius_norm() const;

  friend bool operator==(const Mat2&, const Mat2&) = default;
};

Mat2 operator+(Mat2 x, const Mat2& y);
Mat2 operator-(Mat2 x, const Mat2& y);
Mat2 operator*(const Mat2& x, const Mat2& y);
Mat2 operator*(Complex s, Mat2 x);
Mat2 operator*(double s, Mat2 x);

Mat2 identity2();
Mat2 sigma_x();
Mat2 sigma_y();
Mat2 sigma_z();

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
};

BlochVector operator+(const BlochVector& u, const BlochVector& v);
BlochVector operator*(double s, const BlochVector& v);

/// Hermitian 2x2 operator. Hamiltonians carry rad/us, observables are
/// dimensionless.
class HermitianMatrix2 {
 public:
  HermitianMatrix2() = default;

  /// Validates Hermiticity (1e-12 relative) and symmetrises the stored
  /// entries exactly. Throws InvalidArgument otherwise.
  static HermitianMatrix2 from_matrix(const Mat2& m);

  const Mat2& matrix() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

  /// Operator (spectral) norm.
  double norm() const;

 private:
  explicit HermitianMatrix2(const Mat2& m) : m_(m) {}
  Mat2 m_{};
};

class PureState2 {
 public:
  /// Throws InvalidState unless |amp_e|^2 + |amp_g|^2 = 1 within 1e-9.
  PureState2(Complex amp_e, Complex amp_g);

  /// Scales a non-zero amplitude pair to unit norm.
  static PureState2 normalized(Complex amp_e, Complex amp_g);

  static PureState2 excited() { return {1.0, 0.0}; }
  static PureState2 ground() { return {0.0, 1.0}; }

  Complex amp_e() const { return e_; }
  Complex amp_g() const { return g_; }

  /// |psi><psi|
  Mat2 projector() const;

  friend bool operator==(const PureState2&, const PureState2&) = default;

 private:
  Complex e_;
  Complex g_;
};

/// <a|b>
Complex inner(const PureState2& a, const PureState2& b);

class DensityMatrix2 {
 public:
  static constexpr double kHermiticityTol = 1e-10;
  static constexpr double kTraceTol = 1e-9;
  static constexpr double kPositivityTol = 1e-9;

  /// Validates Hermiticity, unit trace and positivity; throws InvalidState.
  static DensityMatrix2 from_matrix(const Mat2& m);
  static DensityMatrix2 from_pure(const PureState2& psi);
  static DensityMatrix2 maximally_mixed();

  const Mat2& matrix() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

  double trace() const { return m_.trace().real(); }
  double purity() const;
  double min_eigenvalue() const;

 private:
  explicit DensityMatrix2(const Mat2& m) : m_(m) {}
  Mat2 m_{};
};

/// H = (x sigma_x + y sigma_y + z sigma_z) / 2.
HermitianMatrix2 pauli_compose(const BlochVector& v);

double expectation(const PureState2& state, const HermitianMatrix2& obs);
double expectation(const DensityMatrix2& state, const HermitianMatrix2& obs);

struct Eigensystem {
  double e_ground = 0.0;
  double e_excited = 0.0;
  PureState2 ground = PureState2::ground();
  PureState2 excited = PureState2::excited();

  double gap() const { return e_excited - e_ground; }
};

/// Closed-form eigendecomposition. Each eigenvector has its largest-modulus
/// amplitude real and positive (ties go to amp_e). A degenerate input
/// returns (|g>, |e>) with gap() == 0.
Eigensystem eig2(const HermitianMatrix2& h);

/// Multiplies by the phase that makes the anchor amplitude real positive.
/// `anchor_excited` selects amp_e as the anchor, otherwise amp_g.
PureState2 fix_gauge(const PureState2& psi, bool anchor_excited);

/// The deterministic gauge used by eig2.
PureState2 fix_gauge(const PureState2& psi);

/// <target|rho|target>, clamped to [0, 1].
double fidelity(const DensityMatrix2& rho, const PureState2& target);

}  // namespace curvtrack
