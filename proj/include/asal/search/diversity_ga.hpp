#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "asal/core/errors.hpp"
#include "asal/embedding/embedder.hpp"
#include "asal/search/sep_cma_es.hpp"

namespace asal {

struct ArchiveMember {
  Genome theta;
  EmbeddingVector embedding;
  std::uint64_t birth = 0;
};

/// Population for illumination. Every member caches its two most similar
/// other members, so culling costs O(n D) per removal instead of O(n^2 D).
class Archive {
 public:
  explicit Archive(std::size_t capacity = 0) : capacity_(capacity) {}

  std::size_t size() const { return members_.size(); }
  std::size_t capacity() const { return capacity_; }
  const std::vector<ArchiveMember>& members() const { return members_; }
  std::vector<EmbeddingVector> embeddings() const;
  std::uint64_t next_birth() const { return next_birth_; }

  /// Appends a member with the next birth id.
  void insert(Genome theta, EmbeddingVector embedding);
  /// Mean distance (1 - similarity) to the two nearest other members.
  double novelty(std::size_t index) const;
  /// Index of the least novel member; ties go to the oldest.
  std::size_t least_novel() const;
  /// Removes the least novel member and returns its birth id.
  std::uint64_t remove_least_novel();
  /// Mean nearest-neighbour similarity; equals diversity_score(embeddings()).
  double diversity() const;

  /// Rebuilds an archive from stored members (neighbour caches are recomputed).
  static Archive restore(std::size_t capacity, std::vector<ArchiveMember> members, std::uint64_t next_birth);

 private:
  struct Neighbour {
    double sim;
    std::uint64_t birth;
  };
  using Neighbours = std::vector<Neighbour>;  // at most two, best first

  static bool better(const Neighbour& a, const Neighbour& b) {
    return a.sim != b.sim ? a.sim > b.sim : a.birth < b.birth;
  }
  static void offer(Neighbours& list, Neighbour n);
  void recompute(std::size_t index);

  std::size_t capacity_;
  std::vector<ArchiveMember> members_;  // sorted by birth
  std::vector<Neighbours> neighbours_;
  std::vector<std::vector<double>> sims_;  // pairwise similarities, same order as members_
  std::uint64_t next_birth_ = 0;
};

class DivergenceBudgetExceeded : public Error {
 public:
  using Error::Error;
};

struct GaConfig {
  int batch = 32;
  double mutation_sigma = 0.1;
  std::uint64_t seed = 0;
  int workers = 1;
  /// Abort once more than this fraction of all mutants diverged.
  double max_divergence_fraction = 0.5;
};

struct GaState {
  Archive archive;
  std::int64_t iteration = 0;
  std::uint64_t attempts = 0;
  std::uint64_t diverged = 0;
};

/// Maps a genome to its final-frame embedding; throws DivergedError when the rollout blows up.
using GenomeEvaluator = std::function<EmbeddingVector(const Genome&)>;

/// Evaluates `genomes` and fills an archive of capacity genomes.size().
Archive make_archive(const std::vector<Genome>& genomes, const GenomeEvaluator& evaluate, int workers);

/// One iteration: pick `batch` parents uniformly, add N(0, sigma^2 I),
/// evaluate, insert all, then cull the least novel member `batch` times.
/// Diverged mutants are redrawn. Randomness for iteration i comes from
/// stream (seed, i), so a resumed run continues identically.
void ga_iterate(GaState& state, const GaConfig& config, const GenomeEvaluator& evaluate);

/// Runs `iterations` further iterations; `after_iteration` (optional) runs after each.
void ga_illuminate(GaState& state, const GaConfig& config, const GenomeEvaluator& evaluate, std::int64_t iterations,
                   const std::function<void(const GaState&)>& after_iteration = {});

}  // namespace asal
