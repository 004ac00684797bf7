#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asal/core/substrate.hpp"
#include "asal/embedding/embedder.hpp"

namespace asal {

struct SweepReport {
  std::string axis_name;
  std::vector<double> axis;
  std::vector<double> scores;
  std::string substrate;
  std::string target;  // prompt text or image path
  std::uint64_t seed = 0;

  /// CSV with columns `<axis_name>,score`.
  void write_csv(const std::filesystem::path& path) const;
  void write_plot(const std::filesystem::path& path) const;
};

enum class InterpolationReference { A, B };

/// theta(alpha) = (1 - alpha) a + alpha b on linspace(0, 1, n_points); the
/// score is the similarity of its final frame to that of the chosen endpoint.
SweepReport interpolate_curve(const Substrate& substrate, const Theta& a, const Theta& b, int n_points,
                              InterpolationReference reference, int total_steps, std::uint64_t seed,
                              Embedder& embedder, int workers = 1);

struct DimImportance {
  std::size_t dim = 0;
  double stddev = 0;
};

/// Default offsets: +-{1, 2, 3} x 0.05 around the current value.
std::vector<double> default_importance_deltas();

/// For each dim: evaluate `score` at theta[d] + delta for 0 and every +-delta,
/// other dims fixed; record the population std of those scores. Sorted by
/// std descending, ties by dim ascending. `dims` empty means all dims.
std::vector<DimImportance> param_importance(const Theta& theta, const std::function<double(const Theta&)>& score,
                                            std::span<const double> deltas, std::span<const std::size_t> dims = {},
                                            int workers = 1);

/// Similarity of a rollout's final frame to a fixed target embedding.
double final_frame_score(const Substrate& substrate, const Theta& theta, int total_steps, std::uint64_t seed,
                         Embedder& embedder, const EmbeddingVector& target);

/// ||e[k+1] - e[k]|| / (step[k+1] - step[k]) for each consecutive pair of captures.
std::vector<double> embedding_speed(std::span<const EmbeddingVector> embeddings, std::span<const int> capture_steps);

/// First index whose trailing-window mean (truncated at the start) is below
/// epsilon. Throws std::invalid_argument if window < 1.
std::optional<std::size_t> detect_plateau(std::span<const double> speeds, int window, double epsilon);

/// Particle-count sweep: rebuilds the particle life substrate at every count.
SweepReport sweep_population(const std::function<std::unique_ptr<Substrate>(int)>& make, const Theta& theta,
                             std::span<const int> counts, int total_steps, std::uint64_t seed, Embedder& embedder,
                             const EmbeddingVector& target, int workers = 1);

}  // namespace asal
