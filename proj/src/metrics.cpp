#include "frenetkit/metrics.hpp"

#include <limits>
#include <string>

#include "frenetkit/errors.hpp"

namespace frenetkit {
namespace {

void check_lengths(const PredictionSet& pred, std::span<const CartesianPoint> gt) {
  if (pred.trajectories.empty()) {
    throw ValidationError("prediction set \"" + pred.scene_id + "\" has no trajectories");
  }
  if (gt.empty()) throw ValidationError("empty ground truth");
  for (const auto& traj : pred.trajectories) {
    if (traj.size() != gt.size()) {
      throw ValidationError("prediction length " + std::to_string(traj.size()) +
                            " != ground truth length " + std::to_string(gt.size()) +
                            " in scene \"" + pred.scene_id + "\"");
    }
  }
}

}  // namespace

double min_ade(const PredictionSet& pred, std::span<const CartesianPoint> gt) {
  check_lengths(pred, gt);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& traj : pred.trajectories) {
    double sum = 0.0;
    for (std::size_t t = 0; t < gt.size(); ++t) sum += distance(traj[t], gt[t]);
    best = std::min(best, sum / static_cast<double>(gt.size()));
  }
  return best;
}

double min_fde(const PredictionSet& pred, std::span<const CartesianPoint> gt) {
  check_lengths(pred, gt);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& traj : pred.trajectories) {
    best = std::min(best, distance(traj.back(), gt.back()));
  }
  return best;
}

double miss_rate(std::span<const double> min_fde_values, double threshold) {
  if (min_fde_values.empty()) throw ValidationError("miss_rate over empty input");
  std::size_t misses = 0;
  for (double v : min_fde_values) {
    if (v > threshold) ++misses;
  }
  return static_cast<double>(misses) / static_cast<double>(min_fde_values.size());
}

Degradation degradation(const MetricsReport& seen, const MetricsReport& unseen) {
  const auto rel = [](double s, double u) -> std::optional<double> {
    if (s == 0.0) return std::nullopt;
    return 100.0 * (u - s) / s;
  };
  Degradation d;
  d.min_ade_pct = rel(seen.min_ade, unseen.min_ade);
  d.min_fde_pct = rel(seen.min_fde, unseen.min_fde);
  d.miss_rate_pct = rel(seen.miss_rate, unseen.miss_rate);
  return d;
}

}  // namespace frenetkit
