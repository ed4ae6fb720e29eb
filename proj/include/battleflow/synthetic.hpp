#pragma once

#include <cstdint>

#include "battleflow/ingest.hpp"

namespace battleflow {

struct SyntheticParams {
  int teams = 2;
  int units_per_team = 15;
  int max_samples = 1000;  // per unit
  int min_samples = -1;    // per unit; negative means max_samples / 2
  double map_size = 1000.0;
  int events = 150;
  double backtrack_probability = 0.15;
};

/// Deterministic pseudo-random match: teams leave their bases along a few
/// shared corridors, branch, pause, occasionally double back, and trade fire
/// with the nearest enemy.
MatchLog synthesize_match(std::uint64_t seed, const SyntheticParams& params = {});

}  // namespace battleflow
