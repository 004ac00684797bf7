#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "asal/core/errors.hpp"
#include "asal/core/rng.hpp"
#include "asal/substrates/lifelike_ca.hpp"
#include "oracles.hpp"

using namespace asal;

namespace {

CaState shifted(const CaState& s, int sy, int sx) {
  CaState out(s.height(), s.width());
  for (int y = 0; y < s.height(); ++y)
    for (int x = 0; x < s.width(); ++x)
      out.set((y + sy) % s.height(), (x + sx) % s.width(), s.cell(y, x));
  return out;
}

CaState random_grid(Rng& rng, int h, int w, double p) {
  CaState s(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) s.set(y, x, rng.uniform() < p);
  return s;
}

}  // namespace

TEST_SUITE("lifelike_ca") {
  TEST_CASE("notation parsing") {
    CHECK(rule_from_notation("B3/S23").packed == 6152);
    CHECK(rule_from_notation("B/S").packed == 0);
    CHECK(rule_from_notation("B012345678/S012345678").packed == (1u << 18) - 1);
    CHECK(to_notation(CaRule{6152}) == "B3/S23");
    CHECK(to_notation(CaRule{0}) == "B/S");
  }

  TEST_CASE("malformed notation reports a position") {
    const auto position_of = [](const char* text) -> long {
      try {
        rule_from_notation(text);
      } catch (const ParseError& e) {
        return static_cast<long>(e.position());
      }
      return -1;
    };
    CHECK(position_of("B3/S33") == 5);
    CHECK(position_of("B3S23") == 2);
    CHECK(position_of("B9/S") == 1);
    CHECK(position_of("3/S23") == 0);
    CHECK(position_of("B3/S23x") == 6);
    CHECK(position_of("") == 0);
  }

  TEST_CASE("notation round-trips for 1000 random rules") {
    Rng rng = make_rng(123, 0);
    for (int i = 0; i < 1000; ++i) {
      const CaRule r{static_cast<std::uint32_t>(rng.uniform_int(CaRule::kRuleCount))};
      CHECK(rule_from_notation(to_notation(r)) == r);
      CHECK(rule_from_theta(theta_from_rule(r)) == r);
    }
  }

  TEST_CASE("B3/S23 blinker flips orientation") {
    const CaRule life = rule_from_notation("B3/S23");
    const CaState vertical = oracle::cells(5, 5, {{1, 2}, {2, 2}, {3, 2}});
    const CaState horizontal = oracle::cells(5, 5, {{2, 1}, {2, 2}, {2, 3}});
    CHECK(ca_step(vertical, life) == horizontal);
    CHECK(ca_step(horizontal, life) == vertical);
  }

  TEST_CASE("B3/S23 glider moves (+1,+1) every 4 steps") {
    const CaRule life = rule_from_notation("B3/S23");
    const CaState g0 = oracle::cells(8, 8, {{0, 1}, {1, 2}, {2, 0}, {2, 1}, {2, 2}});
    CaState s = g0;
    for (int i = 0; i < 4; ++i) s = ca_step(s, life);
    CHECK(s == shifted(g0, 1, 1));
    for (int i = 0; i < 28; ++i) s = ca_step(s, life);  // 32 steps wraps the 8x8 torus
    CHECK(s == g0);
  }

  TEST_CASE("empty masks kill everything in one step") {
    Rng rng = make_rng(1, 0);
    const CaState s = random_grid(rng, 16, 16, 0.5);
    CHECK(ca_step(s, CaRule{0}).alive_count() == 0);
  }

  TEST_CASE("all-dead grid stays dead unless B0 is set") {
    const CaState dead(10, 12);
    for (std::uint32_t packed = 0; packed < CaRule::kRuleCount; packed += 97) {
      const CaState next = ca_step(dead, CaRule{packed});
      CHECK(next.alive_count() == ((packed & 1u) ? 120 : 0));
    }
    CHECK(ca_step(dead, CaRule{1}).alive_count() == 120);
  }

  TEST_CASE("ca_step matches the per-cell oracle, including non-square and 64-wide grids") {
    Rng rng = make_rng(77, 0);
    for (int trial = 0; trial < 200; ++trial) {
      const int h = 3 + static_cast<int>(rng.uniform_int(20));
      const int w = trial % 10 == 0 ? 64 : 3 + static_cast<int>(rng.uniform_int(62));
      const CaRule rule{static_cast<std::uint32_t>(rng.uniform_int(CaRule::kRuleCount))};
      const CaState s = random_grid(rng, h, w, rng.uniform());
      CHECK(oracle::to_grid(ca_step(s, rule)) == oracle::ca_step(oracle::to_grid(s), rule.packed));
    }
  }

  TEST_CASE("ca_step commutes with toroidal translation") {
    Rng rng = make_rng(9, 0);
    for (int trial = 0; trial < 50; ++trial) {
      const CaRule rule{static_cast<std::uint32_t>(rng.uniform_int(CaRule::kRuleCount))};
      const CaState s = random_grid(rng, 16, 16, 0.3);
      const int dy = static_cast<int>(rng.uniform_int(16)), dx = static_cast<int>(rng.uniform_int(16));
      CHECK(ca_step(shifted(s, dy, dx), rule) == shifted(ca_step(s, rule), dy, dx));
    }
  }

  TEST_CASE("init density hooks and sampled density") {
    CaConfig c;
    Rng rng = make_rng(0, 0);
    c.forced_density = 0.0;
    CHECK(ca_init(c, rng).alive_count() == 0);
    c.forced_density = 1.0;
    CHECK(ca_init(c, rng).alive_count() == 64 * 64);

    // Seed 3: density within [0.05, 0.4] widened by 3 binomial sigmas.
    CaConfig d;
    Rng r3 = make_rng(3, kInitStream);
    const double density = ca_init(d, r3).alive_count() / 4096.0;
    const double lo = 0.05 - 3 * std::sqrt(0.05 * 0.95 / 4096), hi = 0.4 + 3 * std::sqrt(0.4 * 0.6 / 4096);
    CHECK(density >= lo);
    CHECK(density <= hi);
  }

  TEST_CASE("render") {
    const CaState dead(64, 64);
    const Frame black = ca_render(dead, 224);
    CHECK(std::all_of(black.pixels.begin(), black.pixels.end(), [](float v) { return v == 0.0f; }));
    CaState full(64, 64);
    for (int y = 0; y < 64; ++y) full.row(y) = full.row_mask();
    const Frame white = ca_render(full, 224);
    CHECK(std::all_of(white.pixels.begin(), white.pixels.end(), [](float v) { return v == 1.0f; }));

    // One live cell on a 64 grid rendered at 256 is one 4x4 white block.
    CaState one(64, 64);
    one.set(10, 20, true);
    const Frame f = ca_render(one, 256);
    int white_px = 0;
    for (int y = 0; y < 256; ++y)
      for (int x = 0; x < 256; ++x)
        if (f.at(y, x, 0) == 1.0f) {
          ++white_px;
          CHECK(y / 4 == 10);
          CHECK(x / 4 == 20);
        }
    CHECK(white_px == 16);
  }

  TEST_CASE("substrate genome") {
    LifelikeCaSubstrate ca;
    CHECK(ca.genome_dim() == 18);
    CHECK(rule_from_theta(ca.default_theta()) == rule_from_notation("B3/S23"));
    CHECK_THROWS_AS(ca.rollout(Theta{SubstrateId::Lenia, std::vector<double>(18)}, RolloutSpec::final_only(1, 0)),
                    std::invalid_argument);
  }
}
