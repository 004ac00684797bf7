#pragma once

#include <span>
#include <string>
#include <vector>

#include "asal/embedding/embedder.hpp"

namespace asal {

struct PromptEntry {
  int step = 0;
  std::string prompt;
};

/// Which prompt applies at which captured step.
struct PromptSchedule {
  std::vector<PromptEntry> entries;

  /// Throws std::invalid_argument if empty or if a step is not among the captures.
  void validate(std::span<const int> capture_steps) const;
};

/// Mean over schedule entries of <frame embedding at that step, prompt embedding>.
/// `prompt_embeddings` is aligned with `schedule.entries`. Higher is better.
double target_score(std::span<const EmbeddingVector> frame_embeddings, std::span<const int> capture_steps,
                    const PromptSchedule& schedule, std::span<const EmbeddingVector> prompt_embeddings);

/// Mean over captures k >= 1 of max_{j<k} <e_k, e_j>. Lower is more open-ended.
double open_endedness_score(std::span<const EmbeddingVector> trajectory_embeddings);

/// Mean over members of the similarity to their nearest other member. Lower is more diverse.
double diversity_score(std::span<const EmbeddingVector> embeddings);

}  // namespace asal
