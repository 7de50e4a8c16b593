#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace frenetkit {

/// A planar position (or displacement) in the map frame, in meters.
struct CartesianPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Lane-relative position: arc length along the reference path (rebased so
/// the first trajectory point maps to s = 0) and signed perpendicular
/// offset, positive on the left of the travel direction.
struct FrenetPoint {
  double s = 0.0;
  double d = 0.0;
};

inline CartesianPoint operator+(CartesianPoint a, CartesianPoint b) { return {a.x + b.x, a.y + b.y}; }
inline CartesianPoint operator-(CartesianPoint a, CartesianPoint b) { return {a.x - b.x, a.y - b.y}; }
inline CartesianPoint operator*(double k, CartesianPoint a) { return {k * a.x, k * a.y}; }
inline double dot(CartesianPoint a, CartesianPoint b) { return a.x * b.x + a.y * b.y; }
inline double cross(CartesianPoint a, CartesianPoint b) { return a.x * b.y - a.y * b.x; }
inline double norm(CartesianPoint a) { return std::hypot(a.x, a.y); }
inline double distance(CartesianPoint a, CartesianPoint b) { return norm(a - b); }

/// Segments shorter than this are rejected at Polyline construction.
inline constexpr double kMinSegmentLength = 1e-9;

/// Slack allowed when locating an arc length against the path extent.
inline constexpr double kArcExtentSlack = 1e-6;

/// Arc lengths within this distance of an interior vertex resolve to the
/// joint (and use its wedge bisector as the offset direction).
inline constexpr double kJointArcSnap = 1e-9;

/// The two segment directions meeting at an interior vertex and the
/// bisector of their left normals, used as the offset direction there.
struct JointWedge {
  CartesianPoint joint;
  CartesianPoint incoming_dir;
  CartesianPoint outgoing_dir;
  CartesianPoint bisector_normal;
};

/// An ordered centerline with cached segment geometry and cumulative arc
/// lengths. Immutable after construction and safe to share across threads.
class Polyline {
 public:
  /// Validates and caches. Requires >= 2 vertices, every coordinate
  /// finite, and every segment longer than kMinSegmentLength.
  explicit Polyline(std::vector<CartesianPoint> vertices);

  const std::vector<CartesianPoint>& vertices() const { return vertices_; }
  /// Per-vertex cumulative arc length; front() == 0, strictly increasing.
  const std::vector<double>& cumulative_arc() const { return cumulative_arc_; }

  std::size_t segment_count() const { return vertices_.size() - 1; }
  CartesianPoint segment_dir(std::size_t j) const { return dirs_[j]; }
  double segment_length(std::size_t j) const { return cumulative_arc_[j + 1] - cumulative_arc_[j]; }
  /// Unit normal pointing to the left of segment j's travel direction.
  CartesianPoint left_normal(std::size_t j) const { return {-dirs_[j].y, dirs_[j].x}; }
  double total_length() const { return cumulative_arc_.back(); }

  /// Wedge geometry at interior vertex joint_index (1..segment_count()-1).
  JointWedge joint_wedge(std::size_t joint_index) const;

 private:
  std::vector<CartesianPoint> vertices_;
  std::vector<double> cumulative_arc_;
  std::vector<CartesianPoint> dirs_;  // unit direction per segment
};

/// Closest point on one closed segment.
struct SegmentProjection {
  CartesianPoint foot;
  double along = 0.0;  // parameter in [0, 1] within the segment
  double distance = 0.0;
};

/// Globally closest point on a polyline.
struct Projection {
  CartesianPoint foot;
  std::size_t segment_index = 0;
  double along = 0.0;
  bool at_joint = false;  // resolved by the joint wedge rule
  double distance = 0.0;
};

/// Parametric projection onto the closed segment [seg_start, seg_end];
/// `along` is clamped to [0, 1]. Throws ValidationError on a degenerate
/// segment.
SegmentProjection project_point_to_segment(CartesianPoint point, CartesianPoint seg_start,
                                           CartesianPoint seg_end);

/// Globally nearest projection over all segments. Points falling in a
/// joint wedge resolve to the joint itself with at_joint = true. Ties
/// between equidistant segments break toward the smaller segment index.
Projection project_point_to_polyline(CartesianPoint point, const Polyline& path);

/// True iff the point has no perpendicular foot on the interior of either
/// segment adjacent to the joint (foot parameter >= 1 on the incoming
/// segment and <= 0 on the outgoing one). Throws on endpoint vertices.
bool wedge_membership(CartesianPoint point, std::size_t joint_index, const Polyline& path);

/// Perpendicular offset with sign from the cross product of the local
/// travel direction with (point - foot): positive left, negative right.
/// At a joint the local direction is the one perpendicular to the wedge
/// bisector. A point exactly on the path returns +0.
double signed_offset(CartesianPoint point, const Projection& proj, const Polyline& path);

/// Un-rebased Frenet coordinates of a single point: s is the raw arc
/// length of its projection, d the signed offset.
FrenetPoint to_frenet_raw(CartesianPoint point, const Polyline& path);

/// A trajectory in the Frenet frame plus the raw arc length of the first
/// point's projection, needed to invert the transform.
struct FrenetTrajectory {
  std::vector<FrenetPoint> points;
  double s1_raw = 0.0;
};

/// Forward transform; the first output point has s = 0 exactly.
FrenetTrajectory cartesian_to_frenet(std::span<const CartesianPoint> traj, const Polyline& path);

/// Inverse transform. Arc lengths are located against the path with
/// kArcExtentSlack tolerance; anything further outside throws
/// ValidationError. Raw arcs within kJointArcSnap of an interior vertex
/// use the wedge bisector as the offset direction.
std::vector<CartesianPoint> frenet_to_cartesian(std::span<const FrenetPoint> pts,
                                                const Polyline& path, double s1_raw);

/// Inverse transform that clamps out-of-extent arc lengths to the path
/// ends instead of throwing; `clamped_points`, when given, receives the
/// number of points that needed clamping.
std::vector<CartesianPoint> frenet_to_cartesian_clamped(std::span<const FrenetPoint> pts,
                                                        const Polyline& path, double s1_raw,
                                                        std::size_t* clamped_points = nullptr);

}  // namespace frenetkit
