#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "asal/objectives.hpp"
#include "asal/search/diversity_ga.hpp"

using namespace asal;

namespace {

// The embedding is the normalised genome itself.
EmbeddingVector identity_embed(const Genome& g) {
  return EmbeddingVector::normalized(std::vector<float>(g.begin(), g.end()));
}

Genome basis(std::size_t dim, std::size_t k) {
  Genome g(dim, 0.0);
  g[k] = 1.0;
  return g;
}

std::set<std::vector<float>> embedding_set(const Archive& a) {
  std::set<std::vector<float>> s;
  for (const auto& m : a.members()) s.insert(m.embedding.values);
  return s;
}

}  // namespace

TEST_SUITE("diversity_ga") {
  TEST_CASE("the first removal hits a duplicate") {
    Archive a(3);
    a.insert({1, 0, 0}, identity_embed({1, 0, 0}));
    a.insert({0.6, 0.8, 0}, identity_embed({0.6, 0.8, 0}));
    a.insert({1, 0, 0}, identity_embed({1, 0, 0}));
    const auto removed = a.remove_least_novel();
    CHECK((removed == 0 || removed == 2));
    CHECK(removed == 0);  // ties go to the oldest
    CHECK(a.size() == 2);
  }

  TEST_CASE("novelty is the mean distance to the two nearest") {
    Archive a(4);
    for (std::size_t k = 0; k < 3; ++k) a.insert(basis(3, k), identity_embed(basis(3, k)));
    a.insert({1, 1, 0}, identity_embed({1, 1, 0}));
    const double c = 1 / std::sqrt(2.0);
    // Member 3 sits at cosine c from members 0 and 1.
    CHECK(a.novelty(3) == doctest::Approx(1 - c));
    CHECK(a.novelty(2) == doctest::Approx(1.0));
    CHECK(a.novelty(0) == doctest::Approx(((1 - c) + 1.0) / 2));
    CHECK(a.least_novel() == 3);
    CHECK(a.diversity() == doctest::Approx(diversity_score(a.embeddings())));
  }

  TEST_CASE("zero-sigma mutation only culls duplicates") {
    std::vector<Genome> init;
    for (std::size_t k = 0; k < 6; ++k) init.push_back(basis(6, k));
    GaState state{make_archive(init, identity_embed, 1)};
    const auto before = embedding_set(state.archive);
    GaConfig cfg;
    cfg.batch = 4;
    cfg.mutation_sigma = 0.0;
    cfg.seed = 3;
    ga_illuminate(state, cfg, identity_embed, 10);
    CHECK(state.archive.size() == 6);
    CHECK(embedding_set(state.archive) == before);
    CHECK(state.iteration == 10);
  }

  TEST_CASE("size returns to capacity and diversity does not get worse on average") {
    std::vector<Genome> init(16, Genome(5, 0.0));
    Rng rng = make_rng(8, 77);
    for (auto& g : init)
      for (double& v : g) v = 1.0 + 0.05 * rng.normal();
    GaState state{make_archive(init, identity_embed, 2)};
    const double start = state.archive.diversity();
    GaConfig cfg;
    cfg.batch = 8;
    cfg.mutation_sigma = 0.3;
    cfg.seed = 1;
    cfg.workers = 2;
    ga_illuminate(state, cfg, identity_embed, 30, [&](const GaState& s) {
      CHECK(s.archive.size() == 16);
      CHECK(s.archive.diversity() == doctest::Approx(diversity_score(s.archive.embeddings())));
    });
    CHECK(state.archive.diversity() <= start);
    CHECK(state.attempts == 30u * 8u);
  }

  TEST_CASE("runs are reproducible and resume from any iteration") {
    std::vector<Genome> init;
    Rng rng = make_rng(2, 5);
    for (int i = 0; i < 10; ++i) {
      Genome g(4);
      for (double& v : g) v = rng.normal();
      init.push_back(g);
    }
    GaConfig cfg;
    cfg.batch = 5;
    cfg.seed = 42;
    GaState a{make_archive(init, identity_embed, 1)};
    ga_illuminate(a, cfg, identity_embed, 6);

    GaState b{make_archive(init, identity_embed, 1)};
    ga_illuminate(b, cfg, identity_embed, 3);
    GaState c{Archive::restore(b.archive.capacity(), b.archive.members(), b.archive.next_birth()), b.iteration,
              b.attempts, b.diverged};
    ga_illuminate(c, cfg, identity_embed, 3);
    REQUIRE(a.archive.size() == c.archive.size());
    for (std::size_t i = 0; i < a.archive.size(); ++i) {
      CHECK(a.archive.members()[i].theta == c.archive.members()[i].theta);
      CHECK(a.archive.members()[i].birth == c.archive.members()[i].birth);
    }
  }

  TEST_CASE("diverged mutants are redrawn; persistent divergence aborts") {
    std::vector<Genome> init;
    for (std::size_t k = 0; k < 4; ++k) init.push_back(basis(4, k));
    GaConfig cfg;
    cfg.batch = 4;
    cfg.mutation_sigma = 0.5;

    int calls = 0;
    const GenomeEvaluator flaky = [&](const Genome& g) {
      if (++calls % 3 == 0) throw DivergedError(5);
      return identity_embed(g);
    };
    GaState state{make_archive(init, identity_embed, 1)};
    ga_illuminate(state, cfg, flaky, 5);
    CHECK(state.archive.size() == 4);
    CHECK(state.diverged > 0);
    CHECK(state.attempts == 20 + state.diverged);

    const GenomeEvaluator broken = [](const Genome&) -> EmbeddingVector { throw DivergedError(1); };
    GaState dead{make_archive(init, identity_embed, 1)};
    CHECK_THROWS_AS(ga_iterate(dead, cfg, broken), DivergenceBudgetExceeded);
    CHECK(dead.archive.size() == 4);
  }
}
