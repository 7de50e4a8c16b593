#pragma once

// Small hand-built scenes for unit tests.

#include <cmath>
#include <string>
#include <vector>

#include "frenetkit/scene.hpp"

namespace builders {

using frenetkit::CartesianPoint;
using frenetkit::Scene;
using frenetkit::TimedPoint;

inline std::vector<CartesianPoint> straight_vertices(double length, double y = 0.0) {
  return {{0.0, y}, {length, y}};
}

inline std::vector<CartesianPoint> arc_vertices(double radius, double angle_span,
                                                std::size_t steps) {
  std::vector<CartesianPoint> out;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double theta = angle_span * static_cast<double>(i) / static_cast<double>(steps);
    out.push_back({radius * std::sin(theta), radius * (1.0 - std::cos(theta))});
  }
  return out;
}

/// Agent moving along the vertex chain at constant speed from start_arc;
/// points lie exactly on the chain.
inline Scene scene_on_path(std::vector<CartesianPoint> vertices, double speed, double start_arc,
                           bool with_future, std::string id = "test-scene") {
  Scene scene;
  scene.scene_id = std::move(id);
  const frenetkit::Polyline path(vertices);
  const std::size_t total =
      frenetkit::kObservedSteps + (with_future ? frenetkit::kHorizonSteps : 0);
  for (std::size_t i = 0; i < total; ++i) {
    const double t = static_cast<double>(i) * frenetkit::kStepSeconds;
    const frenetkit::FrenetPoint fp{start_arc + speed * t, 0.0};
    const CartesianPoint p = frenetkit::frenet_to_cartesian(std::span(&fp, 1), path, 0.0)[0];
    (i < frenetkit::kObservedSteps ? scene.observed : scene.future).push_back({t, p});
  }
  scene.centerlines.push_back(path);
  return scene;
}

inline Scene scene_at_rest(CartesianPoint where, std::string id = "rest-scene") {
  Scene scene;
  scene.scene_id = std::move(id);
  for (std::size_t i = 0; i < frenetkit::kObservedSteps; ++i) {
    scene.observed.push_back({static_cast<double>(i) * frenetkit::kStepSeconds, where});
  }
  scene.centerlines.emplace_back(
      std::vector<CartesianPoint>{{where.x - 50.0, where.y - 1.0}, {where.x + 50.0, where.y - 1.0}});
  return scene;
}

}  // namespace builders
