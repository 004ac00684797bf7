#pragma once

#include <cstdint>
#include <functional>

#include "asal/search/checkpoint.hpp"
#include "asal/search/sep_cma_es.hpp"

namespace asal {

struct TargetSearchConfig {
  int population = 16;
  /// Initial step size; the "mutation rate" of the search.
  double sigma = 0.1;
  std::uint64_t seed = 0;
  int workers = 1;
};

/// Score to maximise. May throw DivergedError, which scores kDivergedScore.
using ScoreFn = std::function<double(const Genome&)>;

inline constexpr double kDivergedScore = -2.0;

TargetCheckpoint target_search_start(Genome center, double sigma);

/// One Sep-CMA-ES generation. Candidates come from stream
/// (seed, kAskStreamBase + generation), so resuming reproduces the run.
void target_search_generation(TargetCheckpoint& run, const TargetSearchConfig& config, const ScoreFn& score);

}  // namespace asal
