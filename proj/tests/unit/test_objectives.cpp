#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "asal/objectives.hpp"

using namespace asal;

namespace {

EmbeddingVector basis(std::size_t dim, std::size_t k) {
  std::vector<float> v(dim, 0.0f);
  v[k] = 1.0f;
  return {v};
}

// Unit vector in the (e0, e_k) plane with <result, e0> = c.
EmbeddingVector with_cosine(std::size_t dim, std::size_t k, double c) {
  std::vector<float> v(dim, 0.0f);
  v[0] = static_cast<float>(c);
  v[k] = static_cast<float>(std::sqrt(1 - c * c));
  return {v};
}

}  // namespace

TEST_SUITE("objectives") {
  TEST_CASE("target score") {
    const std::vector<int> steps = {10, 20};
    PromptSchedule one{{{20, "x"}}};
    const auto e = basis(4, 1);
    const std::vector<EmbeddingVector> frames = {basis(4, 0), e};
    CHECK(target_score(frames, steps, one, std::vector{e}) == doctest::Approx(1.0));
    CHECK(target_score(frames, steps, one, std::vector{basis(4, 2)}) == doctest::Approx(0.0));

    PromptSchedule two{{{10, "a"}, {20, "b"}}};
    const auto p = basis(4, 0);
    const std::vector<EmbeddingVector> frames2 = {with_cosine(4, 1, 0.2), with_cosine(4, 2, 0.6)};
    CHECK(target_score(frames2, steps, two, std::vector{p, p}) == doctest::Approx(0.4));
  }

  TEST_CASE("schedule validation") {
    const std::vector<int> steps = {10, 20};
    CHECK_THROWS_AS(PromptSchedule{}.validate(steps), std::invalid_argument);
    CHECK_THROWS_AS((PromptSchedule{{{15, "x"}}}.validate(steps)), std::invalid_argument);
    CHECK_NOTHROW((PromptSchedule{{{10, "x"}}}.validate(steps)));
  }

  TEST_CASE("open-endedness score") {
    const auto a = basis(3, 0);
    CHECK(open_endedness_score(std::vector{a, a, a, a}) == doctest::Approx(1.0));
    CHECK(open_endedness_score(std::vector{basis(3, 0), basis(3, 1), basis(3, 2)}) == doctest::Approx(0.0));

    // <e0,e1> = 0.5; e2 has similarity 0.3 with e0 and 0.0 with e1.
    std::vector<float> e1(4, 0.0f), e2(4, 0.0f);
    e1[0] = 0.5f;
    e1[1] = static_cast<float>(std::sqrt(0.75));
    e2[0] = 0.3f;
    // Choose the e1 component so <e1,e2> = 0.
    e2[1] = static_cast<float>(-0.5 * 0.3 / std::sqrt(0.75));
    e2[2] = static_cast<float>(std::sqrt(1 - 0.09 - e2[1] * e2[1]));
    const std::vector<EmbeddingVector> traj = {basis(4, 0), {e1}, {e2}};
    CHECK(similarity(traj[1], traj[2]) < 0.3);
    CHECK(open_endedness_score(traj) == doctest::Approx(0.4).epsilon(1e-6));
  }

  TEST_CASE("diversity score") {
    const auto a = basis(3, 0);
    CHECK(diversity_score(std::vector{a, a, a}) == doctest::Approx(1.0));
    CHECK(diversity_score(std::vector{basis(3, 0), basis(3, 1), basis(3, 2)}) == doctest::Approx(0.0));

    // x and y are mutual nearest neighbours with 0.9; z's best match is 0.2.
    std::vector<float> y(3, 0.0f), z(3, 0.0f);
    y[0] = 0.9f;
    y[1] = static_cast<float>(std::sqrt(1 - 0.81));
    z[0] = 0.2f;
    z[1] = static_cast<float>(-0.2 * 0.9 / std::sqrt(1 - 0.81));  // <y,z> = 0
    z[2] = static_cast<float>(std::sqrt(1 - 0.04 - z[1] * z[1]));
    const std::vector<EmbeddingVector> set = {basis(3, 0), {y}, {z}};
    CHECK(diversity_score(set) == doctest::Approx(0.6667).epsilon(1e-4));
  }
}
