#include "frenetkit/reference.hpp"

#include <algorithm>
#include <string>

#include "frenetkit/errors.hpp"

namespace frenetkit {

CandidateScore score_candidate(std::span<const CartesianPoint> history,
                               const Polyline& candidate) {
  if (history.size() < 2) {
    throw ValidationError("score_candidate: history needs >= 2 points, got " +
                          std::to_string(history.size()));
  }
  std::vector<CartesianPoint> feet;
  feet.reserve(history.size());
  double distance_sum = 0.0;
  for (const CartesianPoint& p : history) {
    const Projection proj = project_point_to_polyline(p, candidate);
    feet.push_back(proj.foot);
    distance_sum += proj.distance;
  }
  const double n = static_cast<double>(history.size());

  CandidateScore score;
  score.translation = history.back() - feet.back();
  double shape_sum = 0.0;
  for (std::size_t t = 0; t < history.size(); ++t) {
    shape_sum += distance(history[t], feet[t] + score.translation);
  }
  score.distance_similarity = 1.0 / std::max(distance_sum / n, kSimilarityFloor);
  score.shape_similarity = 1.0 / std::max(shape_sum / n, kSimilarityFloor);
  score.total = score.distance_similarity + score.shape_similarity;
  return score;
}

ReferenceSelection select_reference(std::span<const CartesianPoint> history,
                                    std::span<const Polyline> candidates) {
  if (candidates.empty()) throw ValidationError("select_reference: no candidate centerlines");
  ReferenceSelection sel;
  sel.scores.reserve(candidates.size());
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    CandidateScore score = score_candidate(history, candidates[j]);
    score.candidate_index = j;
    sel.scores.push_back(score);
  }
  // Index-order reduction keeps tie-breaks deterministic.
  for (std::size_t j = 1; j < sel.scores.size(); ++j) {
    if (sel.scores[j].total > sel.scores[sel.index].total) sel.index = j;
  }
  return sel;
}

}  // namespace frenetkit
