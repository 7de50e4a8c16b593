#include <doctest.h>

#include <cmath>
#include <vector>

#include "frenetkit/errors.hpp"
#include "frenetkit/reference.hpp"
#include "frenetkit/rng.hpp"
#include "oracles.hpp"

using namespace frenetkit;

TEST_CASE("zero-distance history engages the similarity floor") {
  const Polyline candidate({{0, 0}, {10, 0}});
  const std::vector<CartesianPoint> history{{1, 0}, {2, 0}, {3, 0}};
  const CandidateScore score = score_candidate(history, candidate);
  CHECK(score.distance_similarity == 1e6);
  CHECK(score.shape_similarity == 1e6);
  CHECK(score.total == 2e6);
}

TEST_CASE("pure translation: unit distance, floored shape similarity") {
  const Polyline candidate({{0, 0}, {10, 0}});
  const std::vector<CartesianPoint> history{{0, 1}, {1, 1}, {2, 1}};
  const CandidateScore score = score_candidate(history, candidate);
  CHECK(score.distance_similarity == 1.0);
  CHECK(score.translation.x == 0.0);
  CHECK(score.translation.y == 1.0);
  CHECK(score.shape_similarity == 1e6);
}

TEST_CASE("slanted history against the formula-by-formula oracle") {
  const std::vector<CartesianPoint> candidate_vertices{{0, 0}, {10, 0}};
  const Polyline candidate(candidate_vertices);
  const std::vector<CartesianPoint> history{{0, 1}, {1, 2}, {2, 3}};
  const CandidateScore score = score_candidate(history, candidate);
  const oracles::ScoreOracle oracle =
      oracles::candidate_score_oracle(history, candidate_vertices);
  CHECK(score.distance_similarity == doctest::Approx(oracle.s1).epsilon(1e-6));
  CHECK(score.shape_similarity == doctest::Approx(oracle.s2).epsilon(1e-6));
  // Frozen from the oracle: mean projection distance (1+2+3)/3 = 2, and
  // translated residuals (2,1,0) with mean 1.
  CHECK(score.distance_similarity == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(score.shape_similarity == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(score.translation.y == 3.0);
}

TEST_CASE("history shorter than two points is rejected") {
  const Polyline candidate({{0, 0}, {10, 0}});
  CHECK_THROWS_AS(score_candidate(std::vector<CartesianPoint>{{1, 1}}, candidate),
                  ValidationError);
}

TEST_CASE("selection: argmax, single candidate, and ties") {
  const std::vector<CartesianPoint> history{{0, 0.1}, {1, 0.1}, {2, 0.1}};
  const std::vector<Polyline> one{Polyline({{0, 0}, {10, 0}})};
  CHECK(select_reference(history, one).index == 0);

  // A at mean distance 0.1 m, B at 4.9 m, same shape.
  const std::vector<Polyline> two{Polyline({{0, 0}, {10, 0}}), Polyline({{0, -4.8}, {10, -4.8}})};
  const ReferenceSelection sel = select_reference(history, two);
  CHECK(sel.index == 0);
  CHECK(sel.scores[0].distance_similarity == doctest::Approx(10.0));
  CHECK(sel.scores[1].distance_similarity == doctest::Approx(1.0 / 4.9));

  const std::vector<Polyline> twins{Polyline({{0, 0}, {10, 0}}), Polyline({{0, 0}, {10, 0}})};
  CHECK(select_reference(history, twins).index == 0);

  CHECK_THROWS_AS(select_reference(history, std::vector<Polyline>{}), ValidationError);
}

TEST_CASE("moving the history uniformly further never increases S1") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Polyline candidate({{0, 0}, {100, 0}});
    std::vector<CartesianPoint> history;
    const double base = rng.uniform(0.2, 3.0);
    for (int i = 0; i < 10; ++i) history.push_back({5.0 + i, base + rng.uniform(0.0, 0.5)});
    const double s1_near = score_candidate(history, candidate).distance_similarity;
    std::vector<CartesianPoint> further = history;
    const double shift = rng.uniform(0.1, 2.0);
    for (CartesianPoint& p : further) p.y += shift;
    const double s1_far = score_candidate(further, candidate).distance_similarity;
    CHECK(s1_far <= s1_near);
  }
}

TEST_CASE("S2 is translation-invariant; S1 is not") {
  // Dyadic coordinates on an axis-aligned candidate keep the arithmetic
  // exact, so the invariance holds bit-for-bit.
  const Polyline candidate({{0, 0}, {128, 0}});
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<CartesianPoint> history;
    for (int i = 0; i < 8; ++i) {
      history.push_back({8.0 + i * 2.0 + static_cast<double>(rng.below(16)) / 8.0,
                         static_cast<double>(rng.below(64)) / 8.0 + 0.125});
    }
    const CartesianPoint shift{static_cast<double>(rng.below(32)) / 4.0,
                               static_cast<double>(rng.below(32)) / 4.0 + 0.25};
    std::vector<CartesianPoint> moved = history;
    for (CartesianPoint& p : moved) p = p + shift;

    const CandidateScore before = score_candidate(history, candidate);
    const CandidateScore after = score_candidate(moved, candidate);
    CHECK(after.shape_similarity == before.shape_similarity);
    CHECK(after.distance_similarity != before.distance_similarity);
  }
}

TEST_CASE("adding a dominated candidate never changes the selection") {
  Rng rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<CartesianPoint> history;
    for (int i = 0; i < 8; ++i) history.push_back({static_cast<double>(i), rng.uniform(0.5, 1.5)});
    std::vector<Polyline> candidates;
    candidates.emplace_back(std::vector<CartesianPoint>{{-5, 0}, {15, 0}});
    candidates.emplace_back(std::vector<CartesianPoint>{{-5, 4}, {15, 5}});
    const ReferenceSelection before = select_reference(history, candidates);
    // Pointwise further under both measures than every existing candidate.
    candidates.emplace_back(std::vector<CartesianPoint>{{-5, 40}, {15, 60}});
    const ReferenceSelection after = select_reference(history, candidates);
    CHECK(after.index == before.index);
  }
}

TEST_CASE("selection is deterministic bit-for-bit") {
  Rng rng(31);
  std::vector<CartesianPoint> history;
  for (int i = 0; i < 10; ++i) history.push_back({i * 1.7, rng.uniform(-2, 2)});
  std::vector<Polyline> candidates;
  candidates.emplace_back(std::vector<CartesianPoint>{{0, -1}, {8, 0}, {17, 2}});
  candidates.emplace_back(std::vector<CartesianPoint>{{0, 1}, {9, 1}, {17, 1}});
  const ReferenceSelection a = select_reference(history, candidates);
  const ReferenceSelection b = select_reference(history, candidates);
  CHECK(a.index == b.index);
  REQUIRE(a.scores.size() == b.scores.size());
  for (std::size_t j = 0; j < a.scores.size(); ++j) {
    CHECK(a.scores[j].distance_similarity == b.scores[j].distance_similarity);
    CHECK(a.scores[j].shape_similarity == b.scores[j].shape_similarity);
    CHECK(a.scores[j].total == b.scores[j].total);
  }
}
