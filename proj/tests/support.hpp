#pragma once

// Shared helpers for the unit tests: seeded sampling and an independent
// dense eigensolver used as a reference.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>

#include "curvtrack/manifold.hpp"
#include "curvtrack/quantum_core.hpp"

namespace testing {

using curvtrack::Complex;
using curvtrack::Mat2;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kMhz = 2.0 * kPi * 1.735;    // rad/us
inline constexpr double kKhz = 2.0 * kPi * 0.01735;  // rad/us

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 12345) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  Complex complex(double scale) { return {uniform(-scale, scale), uniform(-scale, scale)}; }

  curvtrack::ManifoldSpec spec(curvtrack::ManifoldKind kind, double ratio_lo = -3.0, double ratio_hi = 3.0) {
    const double d1 = uniform(0.5, 2.0);
    return curvtrack::ManifoldSpec::make(kind, d1, d1 * uniform(ratio_lo, ratio_hi), uniform(0.5, 2.0));
  }

  /// Random point on a random spec whose splitting is at least min_gap.
  std::pair<curvtrack::ManifoldSpec, curvtrack::SurfacePoint> gapped_point(curvtrack::ManifoldKind kind,
                                                                          double min_gap = 0.1) {
    for (;;) {
      const auto s = spec(kind);
      const curvtrack::SurfacePoint p{uniform(0.0, s.theta_span()), uniform(0.0, 2.0 * kPi)};
      if (curvtrack::bloch_vector(s, p).norm() > min_gap) return {s, p};
    }
  }

 private:
  std::mt19937_64 gen_;
};

inline Eigen::Matrix2cd to_eigen(const Mat2& m) {
  Eigen::Matrix2cd out;
  out << m(0, 0), m(0, 1), m(1, 0), m(1, 1);
  return out;
}

/// Eigenvalues (ascending) from Eigen's self-adjoint solver.
inline Eigen::Vector2d reference_eigenvalues(const Mat2& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(to_eigen(m));
  return solver.eigenvalues();
}

inline double max_abs_diff(const Mat2& a, const Mat2& b) {
  double out = 0.0;
  for (int k = 0; k < 4; ++k) out = std::max(out, std::abs(a.a[k] - b.a[k]));
  return out;
}

}  // namespace testing
