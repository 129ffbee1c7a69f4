#include "curvtrack/spectral.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "curvtrack/errors.hpp"
#include "curvtrack/quadrature.hpp"

namespace curvtrack {

using std::numbers::pi;

namespace {

double band_sign(Band band) { return band == Band::Ground ? 1.0 : -1.0; }

Eigensystem checked_eigensystem(const ManifoldSpec& spec, const SurfacePoint& p, double min_gap) {
  Eigensystem es = eig2(hamiltonian(spec, p));
  if (!(es.gap() > min_gap)) throw DegeneratePoint("level splitting closes at this point");
  return es;
}

struct Vec3 {
  double x, y, z;
};

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 as_vec(const BlochVector& v) { return {v.x, v.y, v.z}; }

// Eigenstates of the theta/phi stencil around p, all expressed in one gauge.
struct Stencil {
  PureState2 centre;
  PureState2 theta_plus;
  PureState2 theta_minus;
  PureState2 phi_plus;
  PureState2 phi_minus;
};

Stencil gauge_aligned_stencil(const ManifoldSpec& spec, const SurfacePoint& p, Band band,
                              double h, GaugeAnchor anchor) {
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  const double min_gap = 10.0 * kGapEpsilon;
  const std::array<SurfacePoint, 5> points{{{p.theta, p.phi},
                                            {p.theta + h, p.phi},
                                            {p.theta - h, p.phi},
                                            {p.theta, p.phi + h},
                                            {p.theta, p.phi - h}}};
  std::array<PureState2, 5> raw{PureState2::ground(), PureState2::ground(), PureState2::ground(),
                                PureState2::ground(), PureState2::ground()};
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Eigensystem es = checked_eigensystem(spec, points[k], min_gap);
    raw[k] = band == Band::Ground ? es.ground : es.excited;
  }

  bool anchor_excited = false;
  switch (anchor) {
    case GaugeAnchor::Auto:
      anchor_excited = std::abs(raw[0].amp_e()) >= std::abs(raw[0].amp_g());
      break;
    case GaugeAnchor::Excited:
      anchor_excited = true;
      break;
    case GaugeAnchor::Ground:
      anchor_excited = false;
      break;
  }
  for (auto& psi : raw) {
    const double mod = std::abs(anchor_excited ? psi.amp_e() : psi.amp_g());
    if (mod < 1e-6) throw GaugeDiscontinuity("gauge anchor amplitude vanishes on the stencil");
    psi = fix_gauge(psi, anchor_excited);
  }
  return {raw[0], raw[1], raw[2], raw[3], raw[4]};
}

struct Derivative {
  Complex e;
  Complex g;
};

Derivative central_difference(const PureState2& plus, const PureState2& minus, double h) {
  return {(plus.amp_e() - minus.amp_e()) / (2.0 * h), (plus.amp_g() - minus.amp_g()) / (2.0 * h)};
}

Complex braket(const Derivative& a, const Derivative& b) {
  return std::conj(a.e) * b.e + std::conj(a.g) * b.g;
}

Complex braket(const PureState2& a, const Derivative& b) {
  return std::conj(a.amp_e()) * b.e + std::conj(a.amp_g()) * b.g;
}

}  // namespace

EigenPair eigenstates_closed_form(double delta, double omega, double phi) {
  const double r = std::hypot(delta, omega);
  if (!(r > kGapEpsilon)) throw DegeneratePoint("Delta and Omega both vanish");

  if (std::abs(delta) < 1e-12) {
    const Complex off = 0.5 * delta * std::polar(1.0, -phi);
    Mat2 m;
    m(0, 0) = 0.5 * omega;
    m(1, 1) = -0.5 * omega;
    m(0, 1) = off;
    m(1, 0) = std::conj(off);
    const Eigensystem es = eig2(HermitianMatrix2::from_matrix(m));
    return {es.excited, es.ground};
  }

  // E_e - Omega/2 = (r - Omega)/2 and E_g - Omega/2 = -(r + Omega)/2, each
  // written in the form that avoids cancellation.
  const double up_g = omega > 0.0 ? 0.5 * delta * delta / (r + omega) : 0.5 * (r - omega);
  const double down_g = omega < 0.0 ? -0.5 * delta * delta / (r - omega) : -0.5 * (r + omega);
  const Complex phase = std::polar(1.0, phi);
  return {PureState2::normalized(0.5 * delta, phase * up_g),
          PureState2::normalized(0.5 * delta, phase * down_g)};
}

PureState2 band_state(const ManifoldSpec& spec, const SurfacePoint& p, Band band) {
  const Eigensystem es = eig2(hamiltonian(spec, p));
  return band == Band::Ground ? es.ground : es.excited;
}

double berry_curvature_matrix_element(const ManifoldSpec& spec, const SurfacePoint& p, Band band) {
  const Eigensystem es = checked_eigensystem(spec, p, kGapEpsilon);
  const HamiltonianGradients grad = hamiltonian_gradients(spec, p);
  const Mat2 g_proj = es.ground.projector();
  const Mat2 e_proj = es.excited.projector();

  // <g|dH_theta|e><e|dH_phi|g> = Tr(P_g dH_theta P_e dH_phi)
  const Complex x = (g_proj * grad.d_theta.matrix() * e_proj * grad.d_phi.matrix()).trace();
  const double gap = es.gap();
  // Ground band: -Im(x - conj(x)) / gap^2 = -2 Im(x) / gap^2. The excited
  // band swaps |e> and |g>, which conjugates x.
  return band_sign(band) * (-2.0 * x.imag()) / (gap * gap);
}

double berry_curvature_closed_form(const ManifoldSpec& spec, const SurfacePoint& p, Band band) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  const double d1 = spec.delta1;
  const double d2 = spec.delta2;
  const double o1 = spec.omega1;
  const double radius2 = (d1 * c + d2) * (d1 * c + d2) + o1 * o1 * s * s;
  const double radius = std::sqrt(radius2);
  if (!(radius > kGapEpsilon)) throw DegeneratePoint("level splitting closes at this point");
  const double denom = radius2 * radius;

  double ground = 0.0;
  if (spec.kind == ManifoldKind::Sphere) {
    ground = o1 * o1 * s * (d2 * c + d1) / (2.0 * denom);
  } else {
    ground = -o1 * (2.0 * (d1 * d1 + d2 * d2) * c + d2 * d1 * (std::cos(2.0 * p.theta) + 3.0)) /
             (4.0 * denom);
  }
  return band_sign(band) * ground;
}

double berry_curvature_bloch(const ManifoldSpec& spec, const SurfacePoint& p, Band band) {
  const Vec3 x = as_vec(bloch_vector(spec, p));
  const double n = std::sqrt(dot(x, x));
  if (!(n > kGapEpsilon)) throw DegeneratePoint("Bloch vector vanishes at this point");

  const BlochGradients grad = bloch_gradients(spec, p);
  const Vec3 dx_theta = as_vec(grad.d_theta);
  const Vec3 dx_phi = as_vec(grad.d_phi);

  // d xhat = (dx - xhat (xhat . dx)) / |x|
  const Vec3 xhat{x.x / n, x.y / n, x.z / n};
  auto normalised_derivative = [&](const Vec3& dx) {
    const double along = dot(xhat, dx);
    return Vec3{(dx.x - xhat.x * along) / n, (dx.y - xhat.y * along) / n,
                (dx.z - xhat.z * along) / n};
  };
  const Vec3 dhat_theta = normalised_derivative(dx_theta);
  const Vec3 dhat_phi = normalised_derivative(dx_phi);
  return band_sign(band) * 0.5 * dot(xhat, cross(dhat_theta, dhat_phi));
}

QGTensor qgt_numeric(const ManifoldSpec& spec, const SurfacePoint& p, Band band, double h) {
  const Stencil st = gauge_aligned_stencil(spec, p, band, h, GaugeAnchor::Auto);
  const Derivative d_theta = central_difference(st.theta_plus, st.theta_minus, h);
  const Derivative d_phi = central_difference(st.phi_plus, st.phi_minus, h);

  // <psi|d psi> and its conjugate <d psi|psi>
  const Complex psi_dt = braket(st.centre, d_theta);
  const Complex psi_dp = braket(st.centre, d_phi);

  QGTensor q;
  q.tt = braket(d_theta, d_theta) - std::conj(psi_dt) * psi_dt;
  q.tp = braket(d_theta, d_phi) - std::conj(psi_dt) * psi_dp;
  q.pt = braket(d_phi, d_theta) - std::conj(psi_dp) * psi_dt;
  q.pp = braket(d_phi, d_phi) - std::conj(psi_dp) * psi_dp;
  return q;
}

BerryConnection berry_connection_numeric(const ManifoldSpec& spec, const SurfacePoint& p,
                                         Band band, double h, GaugeAnchor anchor) {
  const Stencil st = gauge_aligned_stencil(spec, p, band, h, anchor);
  const Derivative d_theta = central_difference(st.theta_plus, st.theta_minus, h);
  const Derivative d_phi = central_difference(st.phi_plus, st.phi_minus, h);
  const Complex i(0.0, 1.0);
  return {(i * braket(st.centre, d_theta)).real(), (i * braket(st.centre, d_phi)).real()};
}

double chern_conventional(const ManifoldSpec& spec, Band band, int n_theta, int n_phi) {
  if (n_theta < 8 || n_phi < 8) throw InvalidArgument("chern_conventional needs n >= 8");
  if (spec.kind == ManifoldKind::Sphere) {
    if (std::abs(std::abs(spec.delta1) - std::abs(spec.delta2)) <= kGapEpsilon) {
      throw UndefinedChern("sphere touches the degeneracy (|delta1| = |delta2|)");
    }
  } else if (touches_degeneracy(spec, kGapEpsilon)) {
    throw DegeneratePoint("torus touches the degeneracy");
  }

  const double h_theta = spec.theta_span() / (n_theta - 1);
  const double h_phi = 2.0 * pi / (n_phi - 1);
  std::vector<double> row(static_cast<std::size_t>(n_phi));
  std::vector<double> column(static_cast<std::size_t>(n_theta));
  for (int i = 0; i < n_theta; ++i) {
    const double theta = h_theta * i;
    for (int j = 0; j < n_phi; ++j) {
      row[static_cast<std::size_t>(j)] = berry_curvature_closed_form(spec, {theta, h_phi * j}, band);
    }
    column[static_cast<std::size_t>(i)] = trapezoid_uniform(row, h_phi);
  }
  // The torus integrand is periodic in theta, where the trapezoid rule converges
  // spectrally; Simpson only helps on the sphere's open interval.
  const double integral = spec.kind == ManifoldKind::Torus ? trapezoid_uniform(column, h_theta)
                                                           : simpson_uniform(column, h_theta);
  return integral / (2.0 * pi);
}

double chern_closed_form_sphere(double delta1, double delta2) {
  if (std::abs(std::abs(delta1) - std::abs(delta2)) <= kGapEpsilon) {
    throw UndefinedChern("Chern number is not defined for delta1 = +-delta2");
  }
  auto sign = [](double v) { return v > 0.0 ? 1.0 : -1.0; };
  return 0.5 * (sign(delta1 - delta2) + sign(delta1 + delta2));
}

}  // namespace curvtrack
