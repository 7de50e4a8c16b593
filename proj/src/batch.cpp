#include "frenetkit/batch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "frenetkit/errors.hpp"
#include "frenetkit/reference.hpp"

namespace frenetkit::batch {
namespace {

// True when the point's nearest foot clamps beyond a path end cap.
bool beyond_path_ends(CartesianPoint point, const Projection& proj, const Polyline& path) {
  if (proj.at_joint) return false;
  if (proj.segment_index == 0 && proj.along <= 0.0) {
    return dot(point - path.vertices().front(), path.segment_dir(0)) < 0.0;
  }
  const std::size_t last = path.segment_count() - 1;
  if (proj.segment_index == last && proj.along >= 1.0) {
    return dot(point - path.vertices().back(), path.segment_dir(last)) > 0.0;
  }
  return false;
}

}  // namespace

std::vector<SceneFrenetTable> transform_corpus(std::span<const Scene> scenes, Exec exec) {
  std::vector<SceneFrenetTable> out(scenes.size());
  for_each_index(scenes.size(), exec, [&](std::size_t i) {
    const Scene& scene = scenes[i];
    const std::vector<CartesianPoint> history = points_of(scene.observed);
    SceneFrenetTable& table = out[i];
    table.scene_id = scene.scene_id;
    table.reference_index = select_reference(history, scene.centerlines).index;
    const Polyline& ref = scene.centerlines[table.reference_index];

    std::vector<CartesianPoint> all = history;
    for (const TimedPoint& tp : scene.future) all.push_back(tp.point);
    const FrenetTrajectory ft = cartesian_to_frenet(all, ref);
    table.s1_raw = ft.s1_raw;
    table.observed.assign(ft.points.begin(),
                          ft.points.begin() + static_cast<std::ptrdiff_t>(history.size()));
    table.future.assign(ft.points.begin() + static_cast<std::ptrdiff_t>(history.size()),
                        ft.points.end());
  });
  return out;
}

RoundTripStats roundtrip_corpus(std::span<const Scene> scenes, Exec exec) {
  struct SceneErrors {
    double sum = 0.0;
    double max = 0.0;
    std::size_t count = 0;
  };
  std::vector<SceneErrors> per_scene(scenes.size());
  for_each_index(scenes.size(), exec, [&](std::size_t i) {
    const Scene& scene = scenes[i];
    const std::vector<CartesianPoint> history = points_of(scene.observed);
    const std::size_t ref = select_reference(history, scene.centerlines).index;
    const Polyline& path = scene.centerlines[ref];

    std::vector<CartesianPoint> all = history;
    for (const TimedPoint& tp : scene.future) all.push_back(tp.point);
    const FrenetTrajectory ft = cartesian_to_frenet(all, path);
    const std::vector<CartesianPoint> back = frenet_to_cartesian(ft.points, path, ft.s1_raw);
    SceneErrors& err = per_scene[i];
    for (std::size_t p = 0; p < all.size(); ++p) {
      const double e = distance(all[p], back[p]);
      err.sum += e;
      err.max = std::max(err.max, e);
      ++err.count;
    }
  });

  RoundTripStats stats;
  stats.n_scenes = scenes.size();
  double sum = 0.0;
  for (const SceneErrors& err : per_scene) {
    sum += err.sum;
    stats.max_error = std::max(stats.max_error, err.max);
    stats.n_points += err.count;
  }
  stats.mean_error = stats.n_points > 0 ? sum / static_cast<double>(stats.n_points) : 0.0;
  return stats;
}

std::vector<FeatureVector> feature_matrix(std::span<const Scene> scenes, Exec exec) {
  std::vector<FeatureVector> out(scenes.size());
  for_each_index(scenes.size(), exec,
                 [&](std::size_t i) { out[i] = extract_features(scenes[i]); });
  return out;
}

ErrorFieldGrid compute_error_field(CartesianPoint gt_point, const Polyline& reference,
                                   double resolution, double half_extent, Exec exec) {
  if (resolution <= 0.0 || half_extent <= 0.0) {
    throw ValidationError("compute_error_field: resolution and half_extent must be positive");
  }
  const Projection gt_proj = project_point_to_polyline(gt_point, reference);
  if (beyond_path_ends(gt_point, gt_proj, reference)) {
    throw ValidationError("compute_error_field: ground-truth point outside the mapped region");
  }
  const FrenetPoint gt_frenet = to_frenet_raw(gt_point, reference);

  ErrorFieldGrid grid;
  grid.center = gt_point;
  grid.resolution = resolution;
  grid.half_extent = half_extent;
  const auto half_cells = static_cast<std::size_t>(std::llround(half_extent / resolution));
  grid.side = 2 * half_cells + 1;
  grid.cells.resize(grid.side * grid.side);

  for_each_index(grid.side, exec, [&](std::size_t row) {
    for (std::size_t col = 0; col < grid.side; ++col) {
      const CartesianPoint p{
          gt_point.x + (static_cast<double>(col) - static_cast<double>(half_cells)) * resolution,
          gt_point.y + (static_cast<double>(row) - static_cast<double>(half_cells)) * resolution};
      ErrorFieldCell& cell = grid.cells[row * grid.side + col];
      const Projection proj = project_point_to_polyline(p, reference);
      if (beyond_path_ends(p, proj, reference)) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        cell = {nan, nan, nan, true};
        continue;
      }
      const FrenetPoint fp = to_frenet_raw(p, reference);
      cell.cartesian_error = distance(p, gt_point);
      cell.frenet_error = std::hypot(fp.s - gt_frenet.s, fp.d - gt_frenet.d);
      cell.difference = cell.frenet_error - cell.cartesian_error;
    }
  });
  for (const ErrorFieldCell& cell : grid.cells) {
    if (cell.excluded) ++grid.excluded_count;
  }
  return grid;
}

}  // namespace frenetkit::batch
