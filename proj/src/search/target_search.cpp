#include "asal/search/target_search.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "asal/core/errors.hpp"
#include "asal/core/parallel.hpp"

namespace asal {

TargetCheckpoint target_search_start(Genome center, double sigma) {
  TargetCheckpoint run;
  run.best = center;
  run.best_score = -std::numeric_limits<double>::infinity();
  run.cma = sep_cma_init(std::move(center), sigma);
  return run;
}

void target_search_generation(TargetCheckpoint& run, const TargetSearchConfig& config, const ScoreFn& score) {
  Rng rng = make_rng(config.seed, kAskStreamBase + static_cast<std::uint64_t>(run.cma.generation));
  const auto candidates = sep_cma_ask(run.cma, rng, config.population);
  std::vector<double> scores(candidates.size());
  parallel_for(candidates.size(), config.workers, [&](std::size_t i) {
    try {
      scores[i] = score(candidates[i]);
      if (!std::isfinite(scores[i])) scores[i] = kDivergedScore;
    } catch (const DivergedError&) {
      scores[i] = kDivergedScore;
    }
  });
  std::vector<double> fitness(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    fitness[i] = -scores[i];
    if (scores[i] > run.best_score) {
      run.best_score = scores[i];
      run.best = candidates[i];
    }
  }
  run.cma = sep_cma_tell(run.cma, candidates, fitness);
  run.curve_best.push_back(run.best_score);
  run.curve_mean.push_back(std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size()));
}

}  // namespace asal
