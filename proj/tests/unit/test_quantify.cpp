#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "asal/embedding/pixel_embedder.hpp"
#include "asal/quantify.hpp"
#include "asal/substrates/lenia.hpp"
#include "asal/substrates/particle_life.hpp"

using namespace asal;

namespace {

EmbeddingVector unit(std::size_t dim, std::size_t k) {
  std::vector<float> v(dim, 0.0f);
  v[k] = 1.0f;
  return {v};
}

LeniaConfig small_lenia() {
  LeniaConfig c;
  c.grid_size = 32;
  c.render_size = 32;
  c.max_radius = 6;
  return c;
}

}  // namespace

TEST_SUITE("quantify") {
  TEST_CASE("interpolation endpoints match their reference") {
    const LeniaSubstrate lenia(small_lenia());
    PixelEmbedder e;
    const Theta a = lenia.default_theta();
    Theta b = a;
    Rng rng = make_rng(5, 1);
    for (double& v : b.values) v += 0.5 * rng.normal();

    const auto to_a = interpolate_curve(lenia, a, b, 5, InterpolationReference::A, 12, 0, e, 2);
    REQUIRE(to_a.scores.size() == 5);
    CHECK(to_a.axis.front() == 0.0);
    CHECK(to_a.axis.back() == 1.0);
    CHECK(to_a.scores.front() == doctest::Approx(1.0).epsilon(1e-6));
    const auto to_b = interpolate_curve(lenia, a, b, 3, InterpolationReference::B, 12, 0, e);
    CHECK(to_b.scores.size() == 3);
    CHECK(to_b.scores.back() == doctest::Approx(1.0).epsilon(1e-6));

    Theta short_b = b;
    short_b.values.pop_back();
    CHECK_THROWS_AS(interpolate_curve(lenia, a, short_b, 3, InterpolationReference::A, 4, 0, e), std::invalid_argument);
    CHECK_THROWS_AS(interpolate_curve(lenia, a, b, 1, InterpolationReference::A, 4, 0, e), std::invalid_argument);
  }

  TEST_CASE("parameter importance ranking") {
    const Theta theta{SubstrateId::Lenia, {0.2, -0.1, 0.4, 0.3}};
    const auto score = [](const Theta& t) { return 2 * t.values[0] + std::sin(t.values[2]) + 0.5 * t.values[3]; };
    const auto deltas = default_importance_deltas();
    CHECK(deltas == std::vector<double>{0.05, 0.10, 0.15});
    const auto ranked = param_importance(theta, score, deltas);
    REQUIRE(ranked.size() == 4);
    CHECK(ranked[0].dim == 0);
    CHECK(ranked.back().dim == 1);
    CHECK(ranked.back().stddev == 0.0);

    // Affine rescaling by a positive constant keeps the order.
    const auto scaled = param_importance(theta, [&](const Theta& t) { return 3.0 * score(t) - 7.0; }, deltas, {}, 3);
    for (std::size_t i = 0; i < ranked.size(); ++i) CHECK(scaled[i].dim == ranked[i].dim);

    // Duplicated dims get equal std.
    const auto dup = param_importance(
        theta, [](const Theta& t) { return t.values[0] + t.values[3]; }, deltas, std::vector<std::size_t>{0, 3});
    CHECK(dup[0].stddev == doctest::Approx(dup[1].stddev).epsilon(1e-12));
  }

  TEST_CASE("embedding speed") {
    const std::vector<int> steps = {1, 2, 4};
    const auto e0 = unit(3, 0), e1 = unit(3, 1);
    const auto s = embedding_speed(std::vector{e0, e1, e1}, steps);
    REQUIRE(s.size() == 2);
    CHECK(s[0] == doctest::Approx(std::sqrt(2.0)));
    CHECK(s[1] == 0.0);
    for (double v : embedding_speed(std::vector{e0, e0, e0}, steps)) CHECK(v == 0.0);
    const auto s2 = embedding_speed(std::vector{e0, e1, e0}, steps);
    CHECK(s2[1] == doctest::Approx(std::sqrt(2.0) / 2));
    CHECK_THROWS_AS(embedding_speed(std::vector{e0}, std::vector<int>{1}), std::invalid_argument);
  }

  TEST_CASE("embedding speed is rotation invariant") {
    Rng rng = make_rng(3, 3);
    std::vector<EmbeddingVector> es;
    for (int k = 0; k < 5; ++k) {
      std::vector<float> v(2);
      for (float& x : v) x = static_cast<float>(rng.normal());
      es.push_back(EmbeddingVector::normalized(v));
    }
    const double c = std::cos(0.7), s = std::sin(0.7);
    std::vector<EmbeddingVector> rot;
    for (const auto& e : es)
      rot.push_back({{static_cast<float>(c * e.values[0] - s * e.values[1]),
                      static_cast<float>(s * e.values[0] + c * e.values[1])}});
    const std::vector<int> steps = {0, 1, 3, 6, 10};
    const auto a = embedding_speed(es, steps), b = embedding_speed(rot, steps);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-6));
  }

  TEST_CASE("plateau detection") {
    CHECK(detect_plateau(std::vector<double>{0, 0, 0}, 2, 1e-3) == std::optional<std::size_t>(0));
    CHECK_FALSE(detect_plateau(std::vector<double>{1, 1, 1}, 1, 0.5).has_value());
    CHECK(detect_plateau(std::vector<double>{1, 1, 1, 0, 0, 0}, 1, 0.5) == std::optional<std::size_t>(3));
    CHECK(detect_plateau(std::vector<double>{1, 1, 1, 0, 0, 0}, 3, 0.1) == std::optional<std::size_t>(5));
    CHECK_THROWS_AS(detect_plateau(std::vector<double>{1}, 0, 0.1), std::invalid_argument);
  }

  TEST_CASE("population sweep and report files") {
    PixelEmbedder e;
    const auto target = unit(192, 5);
    const Theta theta{SubstrateId::ParticleLife, std::vector<double>(42, 0.0)};
    const std::vector<int> counts = {50, 100, 200};
    const auto rep = sweep_population(
        [](int n) {
          ParticleLifeConfig c;
          c.particles = n;
          c.render_size = 32;
          return std::make_unique<ParticleLifeSubstrate>(c);
        },
        theta, counts, 5, 0, e, target, 2);
    CHECK(rep.axis == std::vector<double>{50, 100, 200});
    CHECK(rep.scores.size() == 3);
    const std::vector<int> bad = {100, 50};
    CHECK_THROWS_AS(sweep_population([](int) { return std::make_unique<ParticleLifeSubstrate>(); }, theta, bad, 5, 0,
                                     e, target),
                    std::invalid_argument);

    const auto dir = std::filesystem::path(ASAL_TEST_TMP) / "quantify";
    std::filesystem::create_directories(dir);
    rep.write_csv(dir / "pop.csv");
    rep.write_plot(dir / "pop.png");
    std::ifstream in(dir / "pop.csv");
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "particles,score");
    CHECK(row.rfind("50,", 0) == 0);
    CHECK(std::filesystem::file_size(dir / "pop.png") > 0);
  }
}
