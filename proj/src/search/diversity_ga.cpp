#include "asal/search/diversity_ga.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "asal/core/parallel.hpp"
#include "asal/core/rng.hpp"

namespace asal {

std::vector<EmbeddingVector> Archive::embeddings() const {
  std::vector<EmbeddingVector> out;
  out.reserve(members_.size());
  for (const auto& m : members_) out.push_back(m.embedding);
  return out;
}

void Archive::offer(Neighbours& list, Neighbour n) {
  list.push_back(n);
  std::sort(list.begin(), list.end(), better);
  if (list.size() > 2) list.pop_back();
}

void Archive::recompute(std::size_t index) {
  Neighbours list;
  for (std::size_t j = 0; j < members_.size(); ++j) {
    if (j == index) continue;
    offer(list, {sims_[index][j], members_[j].birth});
  }
  neighbours_[index] = std::move(list);
}

void Archive::insert(Genome theta, EmbeddingVector embedding) {
  const std::uint64_t birth = next_birth_++;
  Neighbours own;
  std::vector<double> row(members_.size() + 1, 1.0);
  for (std::size_t j = 0; j < members_.size(); ++j) {
    const double s = similarity(embedding, members_[j].embedding);
    row[j] = s;
    sims_[j].push_back(s);
    offer(own, {s, members_[j].birth});
    offer(neighbours_[j], {s, birth});
  }
  members_.push_back({std::move(theta), std::move(embedding), birth});
  neighbours_.push_back(std::move(own));
  sims_.push_back(std::move(row));
}

double Archive::novelty(std::size_t index) const {
  const auto& list = neighbours_[index];
  if (list.empty()) return 1.0;
  double total = 0;
  for (const auto& n : list) total += 1.0 - n.sim;
  return total / static_cast<double>(list.size());
}

std::size_t Archive::least_novel() const {
  if (members_.empty()) throw std::logic_error("empty archive");
  std::size_t best = 0;
  double best_novelty = novelty(0);
  for (std::size_t i = 1; i < members_.size(); ++i) {
    const double v = novelty(i);
    if (v < best_novelty) {
      best = i;
      best_novelty = v;
    }
  }
  return best;
}

std::uint64_t Archive::remove_least_novel() {
  const std::size_t victim = least_novel();
  const std::uint64_t birth = members_[victim].birth;
  members_.erase(members_.begin() + static_cast<std::ptrdiff_t>(victim));
  neighbours_.erase(neighbours_.begin() + static_cast<std::ptrdiff_t>(victim));
  sims_.erase(sims_.begin() + static_cast<std::ptrdiff_t>(victim));
  for (auto& row : sims_) row.erase(row.begin() + static_cast<std::ptrdiff_t>(victim));
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const auto& list = neighbours_[i];
    if (std::any_of(list.begin(), list.end(), [&](const Neighbour& n) { return n.birth == birth; })) recompute(i);
  }
  return birth;
}

double Archive::diversity() const {
  if (members_.size() < 2) throw std::invalid_argument("diversity needs at least two members");
  double total = 0;
  for (const auto& list : neighbours_) total += list.front().sim;
  return total / static_cast<double>(members_.size());
}

Archive Archive::restore(std::size_t capacity, std::vector<ArchiveMember> members, std::uint64_t next_birth) {
  Archive a(capacity);
  a.members_ = std::move(members);
  a.next_birth_ = next_birth;
  const std::size_t n = a.members_.size();
  a.neighbours_.resize(n);
  a.sims_.assign(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      a.sims_[i][j] = a.sims_[j][i] = similarity(a.members_[i].embedding, a.members_[j].embedding);
  for (std::size_t i = 0; i < n; ++i) a.recompute(i);
  return a;
}

Archive make_archive(const std::vector<Genome>& genomes, const GenomeEvaluator& evaluate, int workers) {
  std::vector<EmbeddingVector> embeddings(genomes.size());
  parallel_for(genomes.size(), workers, [&](std::size_t i) { embeddings[i] = evaluate(genomes[i]); });
  Archive archive(genomes.size());
  for (std::size_t i = 0; i < genomes.size(); ++i) archive.insert(genomes[i], std::move(embeddings[i]));
  return archive;
}

void ga_iterate(GaState& state, const GaConfig& config, const GenomeEvaluator& evaluate) {
  Archive& archive = state.archive;
  if (archive.size() == 0) throw std::invalid_argument("cannot illuminate an empty archive");
  Rng rng = make_rng(config.seed, kGaStreamBase + static_cast<std::uint64_t>(state.iteration));
  const auto draw_mutant = [&] {
    const auto& parent = archive.members()[rng.uniform_int(archive.size())].theta;
    Genome child = parent;
    for (double& v : child) v += config.mutation_sigma * rng.normal();
    return child;
  };

  const std::size_t batch = static_cast<std::size_t>(config.batch);
  std::vector<Genome> mutants(batch);
  std::vector<std::optional<EmbeddingVector>> results(batch);
  std::vector<std::size_t> pending(batch);
  for (std::size_t i = 0; i < batch; ++i) pending[i] = i;
  const std::uint64_t max_attempts = batch * 4;
  std::uint64_t attempts_here = 0;
  while (!pending.empty()) {
    for (std::size_t slot : pending) mutants[slot] = draw_mutant();
    parallel_for(pending.size(), config.workers, [&](std::size_t k) {
      const std::size_t slot = pending[k];
      try {
        results[slot] = evaluate(mutants[slot]);
      } catch (const DivergedError&) {
        results[slot].reset();
      }
    });
    attempts_here += pending.size();
    state.attempts += pending.size();
    std::vector<std::size_t> still;
    for (std::size_t slot : pending)
      if (!results[slot]) still.push_back(slot);
    state.diverged += still.size();
    pending = std::move(still);
    if (!pending.empty() && attempts_here >= max_attempts)
      throw DivergenceBudgetExceeded("iteration " + std::to_string(state.iteration) + ": " +
                                     std::to_string(pending.size()) + " mutants still diverging after " +
                                     std::to_string(attempts_here) + " attempts");
  }
  if (static_cast<double>(state.diverged) > config.max_divergence_fraction * static_cast<double>(state.attempts))
    throw DivergenceBudgetExceeded(std::to_string(state.diverged) + " of " + std::to_string(state.attempts) +
                                   " mutants diverged");

  for (std::size_t i = 0; i < batch; ++i) archive.insert(std::move(mutants[i]), std::move(*results[i]));
  while (archive.size() > archive.capacity()) archive.remove_least_novel();
  ++state.iteration;
}

void ga_illuminate(GaState& state, const GaConfig& config, const GenomeEvaluator& evaluate, std::int64_t iterations,
                   const std::function<void(const GaState&)>& after_iteration) {
  for (std::int64_t i = 0; i < iterations; ++i) {
    ga_iterate(state, config, evaluate);
    if (after_iteration) after_iteration(state);
  }
}

}  // namespace asal
