#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "asal/core/errors.hpp"
#include "asal/core/rng.hpp"
#include "asal/substrates/nca.hpp"

using namespace asal;

namespace {

NcaGenome random_genome(const NcaConfig& c, std::uint64_t seed, double scale = 0.3) {
  Rng rng = make_rng(seed, 3);
  NcaGenome g{std::vector<double>(c.weight_count())};
  for (double& w : g.weights) w = scale * rng.normal();
  return g;
}

NcaState random_state(const NcaConfig& c, std::uint64_t seed) {
  Rng rng = make_rng(seed, 4);
  NcaState s(c.grid_size, c.channels);
  for (double& v : s.cells) v = rng.uniform(-1.0, 1.0);
  return s;
}

NcaState shifted(const NcaState& s, int sy, int sx) {
  NcaState out(s.size, s.channels);
  for (int y = 0; y < s.size; ++y)
    for (int x = 0; x < s.size; ++x)
      for (int c = 0; c < s.channels; ++c) out.at((y + sy) % s.size, (x + sx) % s.size, c) = s.at(y, x, c);
  return out;
}

}  // namespace

TEST_SUITE("nca") {
  TEST_CASE("architecture size") { CHECK(NcaConfig{}.weight_count() == 4608); }

  TEST_CASE("zero genome is a fixed point") {
    NcaConfig c;
    c.grid_size = 16;
    const NcaState s = random_state(c, 1);
    const NcaGenome zero{std::vector<double>(c.weight_count(), 0.0)};
    CHECK(nca_step(s, zero, c).cells == s.cells);
  }

  TEST_CASE("step commutes with toroidal translation") {
    NcaConfig c;
    c.grid_size = 16;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const NcaState s = random_state(c, seed);
      const NcaGenome g = random_genome(c, seed);
      const int dy = static_cast<int>(seed * 3 + 1) % 16, dx = static_cast<int>(seed * 7 + 2) % 16;
      CHECK(nca_step(shifted(s, dy, dx), g, c).cells == shifted(nca_step(s, g, c), dy, dx).cells);
    }
  }

  TEST_CASE("clamp holds after 256 steps") {
    NcaConfig c;
    c.grid_size = 12;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      Rng rng = make_rng(seed, 0);
      NcaState s = nca_init(c, rng);
      const NcaGenome g = random_genome(c, seed, 1.0);
      for (int t = 0; t < 256; ++t) s = nca_step(s, g, c);
      for (double v : s.cells) {
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
      }
    }
  }

  TEST_CASE("init: zero radius seeds one cell; discs stay inside the grid") {
    NcaConfig c;
    c.min_radius = c.max_radius = 0.0;
    Rng rng = make_rng(0, 0);
    const NcaState one = nca_init(c, rng);
    int lit = 0;
    for (int y = 0; y < c.grid_size; ++y)
      for (int x = 0; x < c.grid_size; ++x) lit += one.at(y, x, 0) == 1.0;
    CHECK(lit == 1);

    const NcaConfig d;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng r = make_rng(seed, kInitStream);
      const NcaState s = nca_init(d, r);
      // Bounding box of the disc must not touch the wrap seam.
      int y0 = d.grid_size, y1 = -1, x0 = d.grid_size, x1 = -1, count = 0;
      for (int y = 0; y < d.grid_size; ++y)
        for (int x = 0; x < d.grid_size; ++x)
          if (s.at(y, x, 0) == 1.0) {
            y0 = std::min(y0, y), y1 = std::max(y1, y), x0 = std::min(x0, x), x1 = std::max(x1, x);
            ++count;
            for (int ch = 1; ch < d.channels; ++ch) CHECK(s.at(y, x, ch) == 1.0);
          }
      REQUIRE(count > 0);
      const double ry = (y1 - y0) / 2.0, rx = (x1 - x0) / 2.0;
      CHECK(ry >= std::floor(d.min_radius) - 1);
      CHECK(ry <= d.max_radius);
      CHECK(rx == ry);  // a disc, not a wrapped fragment
      CHECK(y0 >= 0);
      CHECK(y1 < d.grid_size);
    }
    Rng a = make_rng(5, 0), b = make_rng(5, 0);
    CHECK(nca_init(d, a).cells == nca_init(d, b).cells);
  }

  TEST_CASE("render") {
    NcaState s(8, 16);
    const Frame gray = nca_render(s, 16);
    CHECK(std::all_of(gray.pixels.begin(), gray.pixels.end(), [](float v) { return v == 0.5f; }));
    for (int y = 0; y < 8; ++y)
      for (int x = 0; x < 8; ++x) s.at(y, x, 0) = 1.0;
    const Frame red = nca_render(s, 16);
    for (std::size_t i = 0; i < red.pixels.size(); ++i) CHECK(red.pixels[i] == (i % 3 == 0 ? 1.0f : 0.5f));
    CHECK(nca_render(s, 16).pixels == red.pixels);
  }

  TEST_CASE("non-finite updates diverge") {
    NcaConfig c;
    c.grid_size = 8;
    c.render_size = 8;
    c.dt = std::numeric_limits<double>::infinity();
    NcaSubstrate sub(c);
    Theta t{SubstrateId::Nca, random_genome(c, 2).weights};
    CHECK_THROWS_AS(sub.rollout(t, RolloutSpec::final_only(2, 0)), DivergedError);
  }
}
