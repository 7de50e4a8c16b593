#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frenetkit/geometry.hpp"

namespace frenetkit {

/// Miss threshold on the best final displacement.
inline constexpr double kMissThreshold = 2.0;

/// K predicted trajectories for one scene, each of horizon length.
struct PredictionSet {
  std::string scene_id;
  std::vector<std::vector<CartesianPoint>> trajectories;
};

/// minADE/minFDE/MR aggregates for one evaluation group.
struct MetricsReport {
  std::string group;
  std::size_t n_scenes = 0;
  double min_ade = 0.0;
  double min_fde = 0.0;
  double miss_rate = 0.0;
};

/// Minimum over modes of the mean pointwise displacement from ground truth.
double min_ade(const PredictionSet& pred, std::span<const CartesianPoint> gt);

/// Minimum over modes of the final-point displacement.
double min_fde(const PredictionSet& pred, std::span<const CartesianPoint> gt);

/// Fraction of scenes whose minFDE strictly exceeds the threshold.
double miss_rate(std::span<const double> min_fde_values, double threshold = kMissThreshold);

/// Relative deterioration of unseen vs seen, in percent, per metric.
/// A zero seen value makes the ratio undefined (reported empty).
struct Degradation {
  std::optional<double> min_ade_pct;
  std::optional<double> min_fde_pct;
  std::optional<double> miss_rate_pct;
};

Degradation degradation(const MetricsReport& seen, const MetricsReport& unseen);

}  // namespace frenetkit
