#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "frenetkit/geometry.hpp"

namespace frenetkit {

/// Mean distances are floored at this value before inversion, so a history
/// lying exactly on a centerline scores 1e6 instead of dividing by zero.
inline constexpr double kSimilarityFloor = 1e-6;

/// Similarity of one candidate centerline to an observed history:
/// distance_similarity is the reciprocal mean projection distance,
/// shape_similarity the reciprocal mean distance after translating the
/// candidate's projections by `translation` (current position minus its
/// projection).
struct CandidateScore {
  std::size_t candidate_index = 0;
  double distance_similarity = 0.0;  // 1/m
  double shape_similarity = 0.0;     // 1/m
  CartesianPoint translation;        // m
  double total = 0.0;                // distance_similarity + shape_similarity
};

/// Scores one candidate against the history. Requires >= 2 history points.
CandidateScore score_candidate(std::span<const CartesianPoint> history, const Polyline& candidate);

/// Argmax of the summed similarities over all candidates; ties break
/// toward the smaller index. All scores are returned for audit.
struct ReferenceSelection {
  std::size_t index = 0;
  std::vector<CandidateScore> scores;
};

ReferenceSelection select_reference(std::span<const CartesianPoint> history,
                                    std::span<const Polyline> candidates);

}  // namespace frenetkit
