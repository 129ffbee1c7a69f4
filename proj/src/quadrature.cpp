#include "curvtrack/quadrature.hpp"

#include <cstddef>

#include "curvtrack/errors.hpp"

namespace curvtrack {

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw InvalidArgument("linspace needs at least two points");
  std::vector<double> xs(static_cast<std::size_t>(n));
  const double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = lo + h * i;
  xs.back() = hi;
  return xs;
}

double trapezoid(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("trapezoid: size mismatch");
  double s = 0.0;
  for (std::size_t k = 1; k < xs.size(); ++k) {
    s += 0.5 * (xs[k] - xs[k - 1]) * (ys[k] + ys[k - 1]);
  }
  return s;
}

double trapezoid_uniform(std::span<const double> ys, double h) {
  if (ys.size() < 2) return 0.0;
  double s = 0.5 * (ys.front() + ys.back());
  for (std::size_t k = 1; k + 1 < ys.size(); ++k) s += ys[k];
  return s * h;
}

double simpson_uniform(std::span<const double> ys, double h) {
  const std::size_t n = ys.size();
  if (n < 4) throw InvalidArgument("simpson_uniform needs at least 4 samples");
  const std::size_t intervals = n - 1;
  const std::size_t even_part = intervals % 2 == 0 ? intervals : intervals - 3;

  double s = 0.0;
  if (even_part > 0) {
    double acc = ys[0] + ys[even_part];
    for (std::size_t k = 1; k < even_part; ++k) acc += (k % 2 == 1 ? 4.0 : 2.0) * ys[k];
    s += acc * h / 3.0;
  }
  if (even_part != intervals) {
    const std::size_t k = even_part;
    s += 3.0 * h / 8.0 * (ys[k] + 3.0 * ys[k + 1] + 3.0 * ys[k + 2] + ys[k + 3]);
  }
  return s;
}

}  // namespace curvtrack
