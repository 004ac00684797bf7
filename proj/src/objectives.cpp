#include "asal/objectives.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace asal {

void PromptSchedule::validate(std::span<const int> capture_steps) const {
  if (entries.empty()) throw std::invalid_argument("prompt schedule needs at least one entry");
  for (const auto& e : entries) {
    if (std::find(capture_steps.begin(), capture_steps.end(), e.step) == capture_steps.end())
      throw std::invalid_argument("scheduled step " + std::to_string(e.step) + " is not a capture step");
  }
}

double target_score(std::span<const EmbeddingVector> frame_embeddings, std::span<const int> capture_steps,
                    const PromptSchedule& schedule, std::span<const EmbeddingVector> prompt_embeddings) {
  if (frame_embeddings.size() != capture_steps.size())
    throw std::invalid_argument("frame embeddings are not aligned with capture steps");
  if (prompt_embeddings.size() != schedule.entries.size())
    throw std::invalid_argument("prompt embeddings are not aligned with the schedule");
  schedule.validate(capture_steps);
  double total = 0;
  for (std::size_t i = 0; i < schedule.entries.size(); ++i) {
    const auto it = std::find(capture_steps.begin(), capture_steps.end(), schedule.entries[i].step);
    total += similarity(frame_embeddings[it - capture_steps.begin()], prompt_embeddings[i]);
  }
  return total / static_cast<double>(schedule.entries.size());
}

double open_endedness_score(std::span<const EmbeddingVector> e) {
  if (e.size() < 2) throw std::invalid_argument("open-endedness needs at least two frames");
  double total = 0;
  for (std::size_t t = 1; t < e.size(); ++t) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < t; ++h) best = std::max(best, similarity(e[t], e[h]));
    total += best;
  }
  return total / static_cast<double>(e.size() - 1);
}

double diversity_score(std::span<const EmbeddingVector> e) {
  if (e.size() < 2) throw std::invalid_argument("diversity needs at least two members");
  std::vector<double> nearest(e.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      const double s = similarity(e[i], e[j]);
      nearest[i] = std::max(nearest[i], s);
      nearest[j] = std::max(nearest[j], s);
    }
  }
  double total = 0;
  for (double v : nearest) total += v;
  return total / static_cast<double>(e.size());
}

}  // namespace asal
