#include "frenetkit/scene.hpp"

#include <cmath>
#include <string>

#include "frenetkit/errors.hpp"

namespace frenetkit {
namespace {

void check_spacing(const Scene& scene, const std::vector<TimedPoint>& seq, double prev_t,
                   bool have_prev) {
  for (const TimedPoint& tp : seq) {
    if (!std::isfinite(tp.t) || !std::isfinite(tp.point.x) || !std::isfinite(tp.point.y)) {
      throw ValidationError("scene \"" + scene.scene_id + "\": non-finite trajectory value");
    }
    if (have_prev && std::abs(tp.t - prev_t - kStepSeconds) > kTimestampSlack) {
      throw ValidationError("scene \"" + scene.scene_id + "\": timestamps must increase by " +
                            std::to_string(kStepSeconds) + " s, got step " +
                            std::to_string(tp.t - prev_t));
    }
    prev_t = tp.t;
    have_prev = true;
  }
}

}  // namespace

void validate_scene(const Scene& scene) {
  if (scene.scene_id.empty()) throw ValidationError("scene with empty scene_id");
  if (scene.observed.size() != kObservedSteps) {
    throw ValidationError("scene \"" + scene.scene_id + "\": observed length " +
                          std::to_string(scene.observed.size()) +
                          " != " + std::to_string(kObservedSteps));
  }
  if (!scene.future.empty() && scene.future.size() != kHorizonSteps) {
    throw ValidationError("scene \"" + scene.scene_id + "\": future length " +
                          std::to_string(scene.future.size()) +
                          " != " + std::to_string(kHorizonSteps));
  }
  if (scene.centerlines.empty()) {
    throw ValidationError("scene \"" + scene.scene_id + "\": empty centerline list");
  }
  check_spacing(scene, scene.observed, 0.0, false);
  check_spacing(scene, scene.future, scene.observed.back().t, true);
}

std::vector<CartesianPoint> points_of(const std::vector<TimedPoint>& timed) {
  std::vector<CartesianPoint> out;
  out.reserve(timed.size());
  for (const TimedPoint& tp : timed) out.push_back(tp.point);
  return out;
}

}  // namespace frenetkit
