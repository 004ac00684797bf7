#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "asal/atlas.hpp"
#include "asal/core/rng.hpp"

using namespace asal;

namespace {

// Min-max scaled projection of 2-D points onto the closed-form principal
// axes of their 2x2 covariance, with the same sign convention.
std::vector<Point2> closed_form_pca(const std::vector<std::array<double, 2>>& pts) {
  const double n = static_cast<double>(pts.size());
  double mx = 0, my = 0;
  for (const auto& p : pts) {
    mx += p[0] / n;
    my += p[1] / n;
  }
  double a = 0, b = 0, c = 0;
  for (const auto& p : pts) {
    a += (p[0] - mx) * (p[0] - mx) / n;
    b += (p[0] - mx) * (p[1] - my) / n;
    c += (p[1] - my) * (p[1] - my) / n;
  }
  const double tr = a + c, det = a * c - b * b;
  const double disc = std::sqrt(tr * tr / 4 - det);
  std::vector<Point2> out(pts.size());
  for (int axis = 0; axis < 2; ++axis) {
    const double lambda = tr / 2 + (axis == 0 ? disc : -disc);
    double vx = b, vy = lambda - a;
    if (std::abs(vx) + std::abs(vy) < 1e-15) {
      vx = lambda - c;
      vy = b;
    }
    const double norm = std::hypot(vx, vy);
    vx /= norm;
    vy /= norm;
    if ((std::abs(vx) >= std::abs(vy) ? vx : vy) < 0) {
      vx = -vx;
      vy = -vy;
    }
    std::vector<double> proj;
    for (const auto& p : pts) proj.push_back((p[0] - mx) * vx + (p[1] - my) * vy);
    const auto [lo, hi] = std::minmax_element(proj.begin(), proj.end());
    for (std::size_t i = 0; i < pts.size(); ++i) out[i][axis] = (proj[i] - *lo) / (*hi - *lo);
  }
  return out;
}

Frame solid(int size, float v) { return Frame(size, size, v); }

}  // namespace

TEST_SUITE("atlas") {
  TEST_CASE("two points span the unit range") {
    const std::vector<EmbeddingVector> e = {{{1, 0, 0}}, {{0, 1, 0}}};
    const auto p = project_2d(e);
    REQUIRE(p.size() == 2);
    CHECK(std::abs(p[0][0] - p[1][0]) == doctest::Approx(1.0));
    CHECK(p[0][1] == 0.0);
    CHECK(p[1][1] == 0.0);
    CHECK_THROWS_AS(project_2d(std::vector<EmbeddingVector>{{{1, 0}}}), std::invalid_argument);
  }

  TEST_CASE("duplicated dataset projects identically") {
    Rng rng = make_rng(1, 1);
    std::vector<EmbeddingVector> e;
    for (int i = 0; i < 20; ++i) {
      std::vector<float> v(6);
      for (float& x : v) x = static_cast<float>(rng.normal());
      e.push_back(EmbeddingVector::normalized(v));
    }
    auto doubled = e;
    doubled.insert(doubled.end(), e.begin(), e.end());
    const auto p = project_2d(e), q = project_2d(doubled);
    for (std::size_t i = 0; i < e.size(); ++i) {
      CHECK(q[i][0] == doctest::Approx(p[i][0]).epsilon(1e-9));
      CHECK(q[i][1] == doctest::Approx(p[i][1]).epsilon(1e-9));
      CHECK(q[i + e.size()] == q[i]);
    }
  }

  TEST_CASE("2-D data matches the closed-form eigen decomposition") {
    Rng rng = make_rng(4, 2);
    std::vector<std::array<double, 2>> pts;
    std::vector<EmbeddingVector> e;
    for (int i = 0; i < 50; ++i) {
      const double u = 3 * rng.normal(), w = 0.5 * rng.normal();
      const std::array<double, 2> p = {0.8 * u - 0.6 * w + 2, 0.6 * u + 0.8 * w - 1};
      pts.push_back(p);
      e.push_back({{static_cast<float>(p[0]), static_cast<float>(p[1])}});
    }
    std::vector<std::array<double, 2>> as_float;
    for (const auto& v : e) as_float.push_back({v.values[0], v.values[1]});
    const auto got = project_2d(e);
    const auto want = closed_form_pca(as_float);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(got[i][0] == doctest::Approx(want[i][0]).epsilon(1e-9));
      CHECK(got[i][1] == doctest::Approx(want[i][1]).epsilon(1e-9));
    }
  }

  TEST_CASE("grid sampling") {
    const std::vector<Point2> far = {{0.1, 0.5}, {0.9, 0.5}};
    const auto l = grid_sample(far, 2, 1);
    CHECK(l.tile(0, 0) == std::optional<std::size_t>(0));
    CHECK(l.tile(0, 1) == std::optional<std::size_t>(1));

    const auto empty = grid_sample(std::vector<Point2>{}, 3, 2);
    CHECK(empty.tiles.size() == 6);
    for (const auto& t : empty.tiles) CHECK_FALSE(t.has_value());

    const std::vector<Point2> one_tile = {{0.05, 0.05}, {0.2, 0.3}, {0.3, 0.2}};
    const auto l2 = grid_sample(one_tile, 2, 2);
    CHECK(l2.tile(0, 0) == std::optional<std::size_t>(1));  // tie with index 2
    const std::vector<Point2> nearer = {{0.05, 0.05}, {0.24, 0.26}};
    CHECK(grid_sample(nearer, 2, 2).tile(0, 0) == std::optional<std::size_t>(1));
  }

  TEST_CASE("representatives lie in their tiles and ignore input order up to ties") {
    Rng rng = make_rng(9, 9);
    std::vector<Point2> pts(200);
    for (auto& p : pts) p = {rng.uniform(), rng.uniform()};
    const auto l = grid_sample(pts, 5, 4);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 5; ++c)
        if (const auto idx = l.tile(r, c)) {
          const auto& p = pts[*idx];
          CHECK(p[0] >= c / 5.0);
          CHECK(p[0] <= (c + 1) / 5.0);
          CHECK(p[1] >= r / 4.0);
          CHECK(p[1] <= (r + 1) / 4.0);
        }
    std::vector<Point2> rev(pts.rbegin(), pts.rend());
    const auto lr = grid_sample(rev, 5, 4);
    for (std::size_t t = 0; t < l.tiles.size(); ++t) {
      REQUIRE(l.tiles[t].has_value() == lr.tiles[t].has_value());
      if (l.tiles[t]) CHECK(pts[*l.tiles[t]] == rev[*lr.tiles[t]]);
    }
  }

  TEST_CASE("rendering") {
    const auto single = grid_sample(std::vector<Point2>{{0.5, 0.5}}, 1, 1);
    Frame f(8, 8);
    for (std::size_t i = 0; i < f.pixels.size(); ++i) f.pixels[i] = static_cast<float>(i % 7) / 7.0f;
    const Frame m = render_atlas(single, {{0, f}}, 8);
    CHECK(m.pixels == f.pixels);

    const auto empty = grid_sample(std::vector<Point2>{}, 3, 2);
    const Frame black = render_atlas(empty, {}, 4);
    CHECK(black.width == 12);
    CHECK(black.height == 8);
    for (float v : black.pixels) CHECK(v == 0.0f);

    // Row 0 (low y) is drawn at the bottom of the mosaic.
    const auto two = grid_sample(std::vector<Point2>{{0.5, 0.1}, {0.5, 0.9}}, 1, 2);
    const Frame m2 = render_atlas(two, {{0, solid(16, 0.25f)}, {1, solid(16, 0.75f)}}, 4);
    CHECK(m2.at(0, 0, 0) == 0.75f);
    CHECK(m2.at(7, 0, 0) == 0.25f);
    CHECK_THROWS_AS(render_atlas(two, {{0, solid(4, 0)}}, 4), std::invalid_argument);
  }

  TEST_CASE("layout CSV round trip") {
    const std::vector<Point2> pts = {{0.0, 0.0}, {1.0, 1.0}, {0.4, 0.7}};
    auto l = grid_sample(pts, 4, 4);
    const auto path = std::filesystem::path(ASAL_TEST_TMP) / "atlas_layout.csv";
    std::filesystem::create_directories(path.parent_path());
    l.write_csv(path);
    const auto back = AtlasLayout::read_csv(path, 4, 4);
    CHECK(back.projector == "pca");
    CHECK(back.tiles == l.tiles);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(back.coords[i][0] == doctest::Approx(pts[i][0]));
      CHECK(back.coords[i][1] == doctest::Approx(pts[i][1]));
    }
  }
}
