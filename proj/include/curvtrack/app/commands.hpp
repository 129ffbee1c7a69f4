#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "curvtrack/app/config.hpp"

namespace curvtrack::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPhysics = 1;
inline constexpr int kExitConfig = 2;

struct RunOptions {
  std::string out_dir = ".";
  int threads = 1;
  std::uint64_t seed = 0;  // reserved: nothing in the pipeline is random
};

/// File content the command would write (CSV or SVG). Not used for
/// `validate`. Throws on any error.
std::string produce(const RunConfig& cfg, int threads, std::ostream& log);

/// Runs one command and writes its output under opts.out_dir. Returns 0 on
/// success, 1 on a physics error (or a failed acceptance criterion for
/// `validate`), 2 on a configuration or I/O error. Diagnostics go to err.
int run(const RunConfig& cfg, const RunOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace curvtrack::app
