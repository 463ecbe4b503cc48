#pragma once

// Randomized dominance sweeps: every instance is generated from its own RNG
// seeded by (seed, index), so results do not depend on the worker count.

#include "rlc/report.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rlc {

struct SweepConfig {
  /// One of sweep_suites().
  std::string suite = "dominance";
  std::uint64_t instances = 100;
  std::uint64_t seed = 0;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned workers = 0;
};

/// "dominance", "poisson-binomial", "matroid", "iv", "compound", "gamma".
std::vector<std::string> sweep_suites();

/// Runs the suite and merges per-instance outcomes in index order. An instance
/// passes when every applicable report it produces is dominated; instances
/// with no applicable report are counted as not applicable.
SweepReport run_sweep(const SweepConfig& config);

}  // namespace rlc
