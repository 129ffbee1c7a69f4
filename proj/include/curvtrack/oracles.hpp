#pragma once

// Brute-force references for the geometric quantities. The two oracle
// functions build their eigenstates directly from the Bloch-vector angles
// and never touch the spectral curvature or Chern code, so comparing them
// against those routes is a real cross-check.

#include <functional>
#include <string>
#include <vector>

#include "curvtrack/manifold.hpp"
#include "curvtrack/spectral.hpp"

namespace curvtrack {

struct OracleReport {
  std::string name;
  double max_abs_error = 0.0;
  int samples = 0;
  bool passed = false;
  double tolerance = 0.0;
};

/// Wilson-loop phase around an h x h cell centred on p, divided by h^2.
/// Throws DegeneratePoint if the splitting on any corner is <= 10 kGapEpsilon.
double oracle_curvature_fd(const ManifoldSpec& spec, const SurfacePoint& p, Band band,
                           double h = 1e-3);

/// Lattice Chern number: sum of principal plaquette phases over an n x n
/// grid of the surface, divided by 2pi. Throws DegeneratePoint if the
/// surface is not gapped.
double oracle_chern_plaquette(const ManifoldSpec& spec, Band band, int n);

using CurvatureRoute = std::function<double(const ManifoldSpec&, const SurfacePoint&, Band)>;

/// Every cross-route equivalence check, with sample counts scaled by budget
/// (>= 1). Sample points come from a fixed seed. Failures are reported, not
/// thrown.
std::vector<OracleReport> run_all_oracles(int budget = 10);

/// Same suite with the closed-form curvature route replaced, so a broken
/// implementation can be shown to fail.
std::vector<OracleReport> run_all_oracles(int budget, const CurvatureRoute& closed_form);

}  // namespace curvtrack
