#include "frenetkit/geometry.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "frenetkit/errors.hpp"

namespace frenetkit {
namespace {

bool finite(CartesianPoint p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Unclamped foot parameter of `point` on segment j, normalized to [0, 1]
// over the segment length.
double foot_parameter(CartesianPoint point, const Polyline& path, std::size_t j) {
  const CartesianPoint a = path.vertices()[j];
  return dot(point - a, path.segment_dir(j)) / path.segment_length(j);
}

CartesianPoint offset_direction(const Projection& proj, const Polyline& path) {
  if (proj.at_joint) {
    const std::size_t joint = proj.segment_index + (proj.along > 0.5 ? 1 : 0);
    const CartesianPoint n = path.joint_wedge(joint).bisector_normal;
    return {n.y, -n.x};  // travel direction whose left normal is the bisector
  }
  return path.segment_dir(proj.segment_index);
}

CartesianPoint point_at_arc(const Polyline& path, double raw, CartesianPoint* normal_out) {
  const auto& cum = path.cumulative_arc();
  // Segment containing `raw`: largest j with cum[j] <= raw.
  auto it = std::upper_bound(cum.begin(), cum.end(), raw);
  std::size_t j = it == cum.begin() ? 0 : static_cast<std::size_t>(it - cum.begin()) - 1;
  j = std::min(j, path.segment_count() - 1);

  // Interior vertices hit (within snap) use the wedge bisector so that
  // wedge-collapsed points reconstruct on the bisector line.
  for (std::size_t joint = j; joint <= j + 1; ++joint) {
    if (joint >= 1 && joint <= path.segment_count() - 1 &&
        std::abs(raw - cum[joint]) <= kJointArcSnap) {
      *normal_out = path.joint_wedge(joint).bisector_normal;
      return path.vertices()[joint];
    }
  }
  const double along = (raw - cum[j]) / path.segment_length(j);
  *normal_out = path.left_normal(j);
  return path.vertices()[j] + (along * path.segment_length(j)) * path.segment_dir(j);
}

std::vector<CartesianPoint> inverse_transform(std::span<const FrenetPoint> pts,
                                              const Polyline& path, double s1_raw, bool clamp,
                                              std::size_t* clamped_points) {
  std::vector<CartesianPoint> out;
  out.reserve(pts.size());
  std::size_t clamped = 0;
  const double total = path.total_length();
  for (const FrenetPoint& fp : pts) {
    double raw = fp.s + s1_raw;
    if (raw < -kArcExtentSlack || raw > total + kArcExtentSlack) {
      if (!clamp) {
        throw ValidationError("arc length " + std::to_string(raw) +
                              " outside mapped region [0, " + std::to_string(total) + "]");
      }
      ++clamped;
    }
    raw = std::clamp(raw, 0.0, total);
    CartesianPoint normal;
    const CartesianPoint foot = point_at_arc(path, raw, &normal);
    out.push_back(foot + fp.d * normal);
  }
  if (clamped_points != nullptr) *clamped_points = clamped;
  return out;
}

}  // namespace

Polyline::Polyline(std::vector<CartesianPoint> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) {
    throw ValidationError("polyline needs at least 2 vertices, got " +
                          std::to_string(vertices_.size()));
  }
  cumulative_arc_.reserve(vertices_.size());
  dirs_.reserve(vertices_.size() - 1);
  cumulative_arc_.push_back(0.0);
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!finite(vertices_[i])) {
      throw ValidationError("polyline vertex " + std::to_string(i) + " is not finite");
    }
    if (i == 0) continue;
    const CartesianPoint delta = vertices_[i] - vertices_[i - 1];
    const double len = norm(delta);
    if (len <= kMinSegmentLength) {
      throw ValidationError("degenerate polyline segment " + std::to_string(i - 1) +
                            " (length " + std::to_string(len) + ")");
    }
    cumulative_arc_.push_back(cumulative_arc_.back() + len);
    dirs_.push_back((1.0 / len) * delta);
  }
}

JointWedge Polyline::joint_wedge(std::size_t joint_index) const {
  if (joint_index < 1 || joint_index > segment_count() - 1) {
    throw ValidationError("no wedge at path endpoint (joint index " +
                          std::to_string(joint_index) + ")");
  }
  JointWedge w;
  w.joint = vertices_[joint_index];
  w.incoming_dir = dirs_[joint_index - 1];
  w.outgoing_dir = dirs_[joint_index];
  const CartesianPoint sum = left_normal(joint_index - 1) + left_normal(joint_index);
  const double len = norm(sum);
  // A full reversal leaves the normals opposed; the incoming direction
  // then bisects the wedge.
  w.bisector_normal = len < 1e-12 ? w.incoming_dir : (1.0 / len) * sum;
  return w;
}

SegmentProjection project_point_to_segment(CartesianPoint point, CartesianPoint seg_start,
                                           CartesianPoint seg_end) {
  const CartesianPoint delta = seg_end - seg_start;
  const double len2 = dot(delta, delta);
  if (len2 <= kMinSegmentLength * kMinSegmentLength) {
    throw ValidationError("degenerate segment in projection");
  }
  const double t = std::clamp(dot(point - seg_start, delta) / len2, 0.0, 1.0);
  SegmentProjection proj;
  proj.foot = seg_start + t * delta;
  proj.along = t;
  proj.distance = distance(point, proj.foot);
  return proj;
}

Projection project_point_to_polyline(CartesianPoint point, const Polyline& path) {
  Projection best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < path.segment_count(); ++j) {
    const SegmentProjection sp =
        project_point_to_segment(point, path.vertices()[j], path.vertices()[j + 1]);
    if (sp.distance < best.distance) {
      best.foot = sp.foot;
      best.segment_index = j;
      best.along = sp.along;
      best.distance = sp.distance;
    }
  }
  best.at_joint = false;
  // Feet clamped onto an interior vertex are wedge cases when the point
  // has no perpendicular foot on either adjacent segment.
  if (best.along >= 1.0 && best.segment_index + 1 <= path.segment_count() - 1) {
    best.at_joint = wedge_membership(point, best.segment_index + 1, path);
  } else if (best.along <= 0.0 && best.segment_index >= 1) {
    best.at_joint = wedge_membership(point, best.segment_index, path);
  }
  return best;
}

bool wedge_membership(CartesianPoint point, std::size_t joint_index, const Polyline& path) {
  if (joint_index < 1 || joint_index > path.segment_count() - 1) {
    throw ValidationError("wedge_membership: joint index " + std::to_string(joint_index) +
                          " is a path endpoint");
  }
  return foot_parameter(point, path, joint_index - 1) >= 1.0 &&
         foot_parameter(point, path, joint_index) <= 0.0;
}

double signed_offset(CartesianPoint point, const Projection& proj, const Polyline& path) {
  const double side = cross(offset_direction(proj, path), point - proj.foot);
  return side < 0.0 ? -proj.distance : proj.distance;
}

FrenetPoint to_frenet_raw(CartesianPoint point, const Polyline& path) {
  const Projection proj = project_point_to_polyline(point, path);
  FrenetPoint fp;
  fp.s = path.cumulative_arc()[proj.segment_index] +
         proj.along * path.segment_length(proj.segment_index);
  fp.d = signed_offset(point, proj, path);
  return fp;
}

FrenetTrajectory cartesian_to_frenet(std::span<const CartesianPoint> traj, const Polyline& path) {
  if (traj.empty()) throw ValidationError("cartesian_to_frenet: empty trajectory");
  FrenetTrajectory out;
  out.points.reserve(traj.size());
  for (const CartesianPoint& p : traj) out.points.push_back(to_frenet_raw(p, path));
  out.s1_raw = out.points.front().s;
  for (FrenetPoint& fp : out.points) fp.s -= out.s1_raw;
  return out;
}

std::vector<CartesianPoint> frenet_to_cartesian(std::span<const FrenetPoint> pts,
                                                const Polyline& path, double s1_raw) {
  return inverse_transform(pts, path, s1_raw, /*clamp=*/false, nullptr);
}

std::vector<CartesianPoint> frenet_to_cartesian_clamped(std::span<const FrenetPoint> pts,
                                                        const Polyline& path, double s1_raw,
                                                        std::size_t* clamped_points) {
  return inverse_transform(pts, path, s1_raw, /*clamp=*/true, clamped_points);
}

}  // namespace frenetkit
