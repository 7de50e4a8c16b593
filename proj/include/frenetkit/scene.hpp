#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frenetkit/geometry.hpp"

namespace frenetkit {

/// Observation window and prediction horizon: 2 s observed, 3 s predicted,
/// sampled at 10 Hz.
inline constexpr std::size_t kObservedSteps = 20;
inline constexpr std::size_t kHorizonSteps = 30;
inline constexpr double kStepSeconds = 0.1;
inline constexpr double kTimestampSlack = 1e-6;

struct TimedPoint {
  double t = 0.0;
  CartesianPoint point;
};

/// One prediction instance: agent history, optional ground-truth future,
/// and the candidate centerlines visible in the scene.
struct Scene {
  std::string scene_id;
  std::vector<TimedPoint> observed;  // exactly kObservedSteps
  std::vector<TimedPoint> future;    // empty or exactly kHorizonSteps
  std::vector<Polyline> centerlines; // at least one
  std::optional<int> domain;
};

/// Enforces the Scene invariants; throws ValidationError naming the scene.
void validate_scene(const Scene& scene);

std::vector<CartesianPoint> points_of(const std::vector<TimedPoint>& timed);

}  // namespace frenetkit
