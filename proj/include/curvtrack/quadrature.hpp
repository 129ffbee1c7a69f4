#pragma once

#include <span>
#include <vector>

namespace curvtrack {

/// n points from lo to hi, both endpoints included (n >= 2).
std::vector<double> linspace(double lo, double hi, int n);

/// Composite trapezoid over samples at abscissae xs (any monotone order;
/// the sign follows the direction of xs).
double trapezoid(std::span<const double> xs, std::span<const double> ys);

/// Composite trapezoid on a uniform grid of spacing h.
double trapezoid_uniform(std::span<const double> ys, double h);

/// Composite Simpson on a uniform grid of spacing h. With an odd number of
/// intervals the last three are closed with Simpson's 3/8 rule. Needs at
/// least 4 samples.
double simpson_uniform(std::span<const double> ys, double h);

}  // namespace curvtrack
