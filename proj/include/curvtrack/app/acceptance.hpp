#pragma once

// The acceptance suite: ten numbered criteria with pinned tolerances and
// runtime limits. Shared by `curvtrack validate` and the acceptance test.

#include <functional>
#include <string>
#include <vector>

#include "curvtrack/app/config.hpp"

namespace curvtrack::app {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  double seconds = 0.0;
  double time_limit = 0.0;
  std::string detail;
};

struct AcceptanceOptions {
  int threads = 1;
  /// Where the determinism check writes its files; empty: a fresh directory
  /// under the system temp path, removed afterwards.
  std::string scratch_dir;
};

/// Runs criteria 1..10 in order, calling on_result after each one.
std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& opts,
    const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS  [ 4] title (1.23 s / 60 s): detail"
std::string format_result(const CriterionResult& r);

/// Canonical figure configurations; configs/*.cfg parse to these.
RunConfig fig3_config();  // torus Chern sweep, 1.735 MHz
RunConfig fig4_config();  // torus curvature map, 17.35 kHz
RunConfig fig5_config();  // torus fidelity map with T1/T2*, 1.735 MHz

}  // namespace curvtrack::app
