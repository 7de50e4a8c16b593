#include "frenetkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "frenetkit/errors.hpp"

namespace frenetkit {
namespace {

constexpr double kLateralNoiseSigma = 0.1;
constexpr double kVertexTurnStep = 0.02;  // rad per vertex on curved roads
constexpr double kTrajStartMargin = 3.0;
constexpr double kTrajEndMargin = 14.0;   // room for prediction overshoot

// Scenes arrive ego-normalized: the road starts near the origin heading
// roughly +x, as upstream dataset tooling would emit them.
constexpr double kPlacementShift = 3.0;
constexpr double kPlacementHeading = 0.15;

// On straight roads a quarter of the agents change lanes during the
// prediction horizon: a smoothstep lateral shift that starts after the
// observation window ends.
struct LaneChange {
  bool active = false;
  double delta_d = 0.0;
  double start_t = 0.0;
  double ramp = 1.0;

  double offset_at(double t) const {
    if (!active) return 0.0;
    const double x = std::clamp((t - start_t) / ramp, 0.0, 1.0);
    return delta_d * x * x * (3.0 - 2.0 * x);
  }
};

LaneChange draw_lane_change(Family family, Rng& rng) {
  LaneChange lc;
  if (family != Family::straight || rng.below(4) != 0) return lc;
  lc.active = true;
  lc.delta_d = (rng.below(2) == 0 ? 1.0 : -1.0) * rng.uniform(1.5, 3.5);
  lc.start_t = rng.uniform(2.0, 3.3);
  lc.ramp = rng.uniform(1.2, std::min(2.5, 4.8 - lc.start_t));
  return lc;
}

struct RoadPlan {
  std::vector<CartesianPoint> vertices;  // canonical frame: origin, heading +x
  double start_lo = kTrajStartMargin;
  double start_hi = kTrajStartMargin;
};

void append_arc(std::vector<CartesianPoint>& vertices, double& heading, double radius,
                double angle_span, double turn_sign) {
  const std::size_t steps = std::max<std::size_t>(2, std::llround(angle_span / kVertexTurnStep));
  const double dtheta = angle_span / static_cast<double>(steps);
  const double chord = 2.0 * radius * std::sin(dtheta / 2.0);
  for (std::size_t i = 0; i < steps; ++i) {
    const double mid = heading + turn_sign * dtheta / 2.0;
    vertices.push_back(vertices.back() +
                       CartesianPoint{chord * std::cos(mid), chord * std::sin(mid)});
    heading += turn_sign * dtheta;
  }
}

void append_straight(std::vector<CartesianPoint>& vertices, double heading, double length) {
  vertices.push_back(vertices.back() +
                     CartesianPoint{length * std::cos(heading), length * std::sin(heading)});
}

double default_radius(Family family, bool low) {
  switch (family) {
    case Family::straight: return 0.0;
    case Family::arc: return low ? 30.0 : 42.0;
    case Family::s_curve: return low ? 22.0 : 32.0;
    case Family::right_turn: return low ? 10.0 : 14.0;
    case Family::roundabout_arc: return low ? 12.0 : 18.0;
  }
  return 0.0;
}

RoadPlan plan_road(Family family, double radius, double traj_len, double obs_len, Rng& rng) {
  RoadPlan plan;
  plan.vertices.push_back({0.0, 0.0});
  double heading = 0.0;
  const double body = traj_len + kTrajStartMargin + kTrajEndMargin;
  switch (family) {
    case Family::straight: {
      const double length = body + 26.0;
      append_straight(plan.vertices, heading, length);
      plan.start_hi = length - traj_len - kTrajEndMargin;
      break;
    }
    case Family::arc: {
      const double length = body + 26.0;
      const double turn = rng.below(2) == 0 ? 1.0 : -1.0;
      append_arc(plan.vertices, heading, radius, length / radius, turn);
      plan.start_hi = length - traj_len - kTrajEndMargin;
      break;
    }
    case Family::s_curve: {
      // Trajectory confined to one of the two opposite arcs.
      const double arc_len = traj_len + kTrajStartMargin + kTrajEndMargin + 10.0;
      const double first_turn = rng.below(2) == 0 ? 1.0 : -1.0;
      const bool in_first = rng.below(2) == 0;
      append_arc(plan.vertices, heading, radius, arc_len / radius, first_turn);
      append_arc(plan.vertices, heading, radius, arc_len / radius, -first_turn);
      plan.start_lo = (in_first ? 0.0 : arc_len) + kTrajStartMargin;
      plan.start_hi = in_first ? arc_len - traj_len - 2.0
                               : 2.0 * arc_len - traj_len - kTrajEndMargin;
      break;
    }
    case Family::right_turn: {
      // Observation ends just before the 90-degree turn.
      const double gap = rng.uniform(0.5, 3.0);
      const double lead = obs_len + gap + kTrajStartMargin + 2.0;
      append_straight(plan.vertices, heading, lead);
      append_arc(plan.vertices, heading, radius, std::numbers::pi / 2.0, -1.0);
      append_straight(plan.vertices, heading, traj_len + 20.0);
      plan.start_lo = lead - obs_len - gap - 2.0;
      plan.start_hi = lead - obs_len - gap;
      break;
    }
    case Family::roundabout_arc: {
      const double span = 5.76;  // 330 degrees
      const double turn = rng.below(2) == 0 ? 1.0 : -1.0;
      append_arc(plan.vertices, heading, radius, span, turn);
      plan.start_hi = span * radius - traj_len - kTrajEndMargin;
      break;
    }
  }
  plan.start_hi = std::max(plan.start_hi, plan.start_lo);
  return plan;
}

CartesianPoint rotate(CartesianPoint p, double cos_t, double sin_t) {
  return {cos_t * p.x - sin_t * p.y, sin_t * p.x + cos_t * p.y};
}

std::vector<CartesianPoint> offset_polyline(const Polyline& line, double offset) {
  std::vector<CartesianPoint> out;
  out.reserve(line.vertices().size());
  for (std::size_t i = 0; i < line.vertices().size(); ++i) {
    CartesianPoint n;
    if (i == 0) {
      n = line.left_normal(0);
    } else if (i == line.vertices().size() - 1) {
      n = line.left_normal(line.segment_count() - 1);
    } else {
      n = line.joint_wedge(i).bisector_normal;
    }
    out.push_back(line.vertices()[i] + offset * n);
  }
  return out;
}

}  // namespace

Family family_from_name(const std::string& name) {
  if (name == "straight") return Family::straight;
  if (name == "arc") return Family::arc;
  if (name == "s-curve") return Family::s_curve;
  if (name == "right-turn") return Family::right_turn;
  if (name == "roundabout-arc") return Family::roundabout_arc;
  throw ValidationError("unknown geometry family \"" + name + "\"");
}

std::string family_name(Family family) {
  switch (family) {
    case Family::straight: return "straight";
    case Family::arc: return "arc";
    case Family::s_curve: return "s-curve";
    case Family::right_turn: return "right-turn";
    case Family::roundabout_arc: return "roundabout-arc";
  }
  return "?";
}

FamilySpec family_spec_from_string(const std::string& text) {
  FamilySpec spec;
  std::string name = text;
  const auto colon = name.find(':');
  if (colon != std::string::npos) {
    const std::string range = name.substr(colon + 1);
    name = name.substr(0, colon);
    const auto dash = range.find('-');
    if (dash == std::string::npos) {
      throw ValidationError("bad radius range \"" + range + "\" (want rmin-rmax)");
    }
    spec.radius_min = std::stod(range.substr(0, dash));
    spec.radius_max = std::stod(range.substr(dash + 1));
    if (spec.radius_min <= 0.0 || spec.radius_max < spec.radius_min) {
      throw ValidationError("bad radius range \"" + range + "\"");
    }
  }
  const auto eq = name.find('=');
  if (eq != std::string::npos) {
    spec.count = static_cast<std::size_t>(std::stoull(name.substr(eq + 1)));
    name = name.substr(0, eq);
  }
  spec.family = family_from_name(name);
  return spec;
}

Scene synthesize_scene(const FamilySpec& spec, double speed, double accel,
                       std::string scene_id, Rng& rng) {
  const double rmin = spec.radius_min > 0.0 ? spec.radius_min : default_radius(spec.family, true);
  const double rmax = spec.radius_max > 0.0 ? spec.radius_max : default_radius(spec.family, false);
  const double radius = spec.family == Family::straight ? 0.0 : rng.uniform(rmin, rmax);

  const double total_t =
      static_cast<double>(kObservedSteps + kHorizonSteps - 1) * kStepSeconds;
  const double obs_t = static_cast<double>(kObservedSteps - 1) * kStepSeconds;
  const double traj_len = speed * total_t + 0.5 * accel * total_t * total_t;
  const double obs_len = speed * obs_t + 0.5 * accel * obs_t * obs_t;

  const RoadPlan plan = plan_road(spec.family, radius, traj_len, obs_len, rng);
  const Polyline canonical(plan.vertices);

  const double start_arc = rng.uniform(plan.start_lo, plan.start_hi);
  const LaneChange lane_change = draw_lane_change(spec.family, rng);
  std::vector<FrenetPoint> along;
  along.reserve(kObservedSteps + kHorizonSteps);
  for (std::size_t i = 0; i < kObservedSteps + kHorizonSteps; ++i) {
    const double t = static_cast<double>(i) * kStepSeconds;
    along.push_back({start_arc + speed * t + 0.5 * accel * t * t,
                     lane_change.offset_at(t) + rng.normal(0.0, kLateralNoiseSigma)});
  }
  const std::vector<CartesianPoint> canonical_points =
      frenet_to_cartesian(along, canonical, 0.0);

  // Distractor candidates, with the true centerline at a random slot.
  std::vector<std::vector<CartesianPoint>> candidates;
  const std::size_t n_extra = rng.below(4);
  for (std::size_t e = 0; e < n_extra; ++e) {
    switch (rng.below(3)) {
      case 0:
        candidates.push_back(
            offset_polyline(canonical, rng.below(2) == 0 ? 3.5 : -3.5));
        break;
      case 1: {
        const FrenetPoint anchor{rng.uniform(0.3, 0.7) * canonical.total_length(),
                                 rng.uniform(-8.0, 8.0)};
        const CartesianPoint q =
            frenet_to_cartesian(std::span(&anchor, 1), canonical, 0.0)[0];
        const double h = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const CartesianPoint dir{std::cos(h), std::sin(h)};
        candidates.push_back({q - 60.0 * dir, q + 60.0 * dir});
        break;
      }
      default: {
        const double h = rng.uniform(-0.45, 0.45);
        const CartesianPoint dir{std::cos(h), std::sin(h)};
        const CartesianPoint q = plan.vertices.front() + CartesianPoint{0.0, rng.uniform(-6.0, 6.0)};
        candidates.push_back({q, q + 30.0 * dir});
        break;
      }
    }
  }
  const std::size_t true_slot = rng.below(candidates.size() + 1);
  candidates.insert(candidates.begin() + static_cast<std::ptrdiff_t>(true_slot), plan.vertices);

  const double theta = rng.uniform(-kPlacementHeading, kPlacementHeading);
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);
  const CartesianPoint shift{rng.uniform(-kPlacementShift, kPlacementShift),
                             rng.uniform(-kPlacementShift, kPlacementShift)};

  Scene scene;
  scene.scene_id = std::move(scene_id);
  for (std::size_t i = 0; i < canonical_points.size(); ++i) {
    const TimedPoint tp{static_cast<double>(i) * kStepSeconds,
                        rotate(canonical_points[i], cos_t, sin_t) + shift};
    (i < kObservedSteps ? scene.observed : scene.future).push_back(tp);
  }
  for (auto& vertices : candidates) {
    for (CartesianPoint& v : vertices) v = rotate(v, cos_t, sin_t) + shift;
    scene.centerlines.emplace_back(std::move(vertices));
  }
  validate_scene(scene);
  return scene;
}

SceneFile synthesize_corpus(std::uint64_t seed, std::span<const FamilySpec> families,
                            std::size_t n_per_family) {
  if (families.empty()) throw ValidationError("synthesize_corpus: no families given");
  SceneFile file;
  Rng base(seed);
  std::size_t index = 0;
  for (const FamilySpec& spec : families) {
    const std::size_t count = spec.count > 0 ? spec.count : n_per_family;
    for (std::size_t i = 0; i < count; ++i, ++index) {
      Rng rng = base.fork(index + 1);
      double v_lo = 7.5, v_hi = 12.5;
      switch (spec.family) {
        case Family::arc: v_lo = 10.0; break;
        case Family::s_curve: v_lo = 9.0; break;
        case Family::right_turn: v_lo = 9.0; break;
        case Family::roundabout_arc: v_hi = 9.0; break;
        default: break;
      }
      const double speed = rng.uniform(v_lo, v_hi);
      const double accel = rng.uniform(-0.5, 0.5);
      char id[64];
      std::snprintf(id, sizeof(id), "%s-%06zu", family_name(spec.family).c_str(), index);
      file.records.push_back(synthesize_scene(spec, speed, accel, id, rng));
    }
  }
  return file;
}

}  // namespace frenetkit
