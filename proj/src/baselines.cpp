#include "frenetkit/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "frenetkit/errors.hpp"
#include "frenetkit/reference.hpp"

namespace frenetkit {
namespace {

std::vector<double> flatten_points(std::span<const CartesianPoint> points) {
  std::vector<double> out;
  out.reserve(points.size() * 2);
  for (const CartesianPoint& p : points) {
    out.push_back(p.x);
    out.push_back(p.y);
  }
  return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace

SceneFrameView make_frame_view(const Scene& scene, Frame frame) {
  SceneFrameView view;
  view.plan.frame = frame;
  const std::vector<CartesianPoint> history = points_of(scene.observed);
  if (frame == Frame::cartesian) {
    view.history = history;
    view.future = points_of(scene.future);
    return view;
  }
  view.plan.reference_index = select_reference(history, scene.centerlines).index;
  const Polyline& ref = scene.centerlines[view.plan.reference_index];
  std::vector<CartesianPoint> all = history;
  for (const TimedPoint& tp : scene.future) all.push_back(tp.point);
  const FrenetTrajectory ft = cartesian_to_frenet(all, ref);
  view.plan.s1_raw = ft.s1_raw;
  view.history.reserve(history.size());
  view.future.reserve(scene.future.size());
  for (std::size_t i = 0; i < ft.points.size(); ++i) {
    const CartesianPoint p{ft.points[i].s, ft.points[i].d};
    (i < history.size() ? view.history : view.future).push_back(p);
  }
  return view;
}

std::vector<CartesianPoint> frame_to_cartesian(std::span<const CartesianPoint> frame_points,
                                               const Scene& scene, const FramePlan& plan,
                                               std::size_t* out_of_map) {
  if (plan.frame == Frame::cartesian) {
    if (out_of_map != nullptr) *out_of_map = 0;
    return {frame_points.begin(), frame_points.end()};
  }
  std::vector<FrenetPoint> frenet;
  frenet.reserve(frame_points.size());
  for (const CartesianPoint& p : frame_points) frenet.push_back({p.x, p.y});
  return frenet_to_cartesian_clamped(frenet, scene.centerlines[plan.reference_index],
                                     plan.s1_raw, out_of_map);
}

Frame frame_from_name(const std::string& name) {
  if (name == "cartesian") return Frame::cartesian;
  if (name == "frenet") return Frame::frenet;
  throw ValidationError("unknown frame \"" + name + "\" (want cartesian|frenet)");
}

std::string frame_name(Frame frame) {
  return frame == Frame::cartesian ? "cartesian" : "frenet";
}

PredictorKind predictor_from_name(const std::string& name) {
  if (name == "cv") return PredictorKind::constant_velocity;
  if (name == "nn") return PredictorKind::nearest_neighbor;
  throw ValidationError("unknown predictor \"" + name + "\" (want cv|nn)");
}

std::string predictor_name(PredictorKind kind) {
  return kind == PredictorKind::constant_velocity ? "cv" : "nn";
}

std::vector<CartesianPoint> constant_velocity_predict(std::span<const CartesianPoint> observed,
                                                      std::size_t horizon) {
  if (observed.size() < 2) {
    throw ValidationError("constant_velocity_predict: need >= 2 observed points");
  }
  const std::size_t window = std::min(kVelocityWindowSteps, observed.size() - 1);
  const CartesianPoint last = observed.back();
  const CartesianPoint velocity =
      (1.0 / (static_cast<double>(window) * kStepSeconds)) *
      (last - observed[observed.size() - 1 - window]);
  std::vector<CartesianPoint> out;
  out.reserve(horizon);
  for (std::size_t j = 1; j <= horizon; ++j) {
    out.push_back(last + (static_cast<double>(j) * kStepSeconds) * velocity);
  }
  return out;
}

NnBank build_nn_bank(std::span<const Scene> bank_scenes, Frame frame, Exec exec) {
  if (bank_scenes.empty()) throw ValidationError("build_nn_bank: empty bank");
  NnBank bank;
  bank.frame = frame;
  bank.representations.resize(bank_scenes.size());
  bank.futures.resize(bank_scenes.size());
  bank.last_observed.resize(bank_scenes.size());
  bank.scene_ids.resize(bank_scenes.size());
  for (const Scene& scene : bank_scenes) {
    if (scene.future.empty()) {
      throw ValidationError("build_nn_bank: scene \"" + scene.scene_id + "\" has no future");
    }
  }
  batch::for_each_index(bank_scenes.size(), exec, [&](std::size_t i) {
    const SceneFrameView view = make_frame_view(bank_scenes[i], frame);
    bank.representations[i] = flatten_points(view.history);
    bank.futures[i] = view.future;
    bank.last_observed[i] = view.history.back();
    bank.scene_ids[i] = bank_scenes[i].scene_id;
  });
  return bank;
}

PredictionSet nn_predict(const Scene& query, const NnBank& bank, std::size_t k,
                         const FramePlan& plan, std::size_t* out_of_map) {
  if (bank.representations.empty()) throw ValidationError("nn_predict: empty bank");
  if (k < 1) throw ValidationError("nn_predict: k must be >= 1");
  if (plan.frame != bank.frame) throw ValidationError("nn_predict: bank frame mismatch");

  const SceneFrameView view = make_frame_view(query, plan.frame);
  const std::vector<double> rep = flatten_points(view.history);

  std::vector<std::pair<double, std::size_t>> ranked(bank.representations.size());
  for (std::size_t i = 0; i < bank.representations.size(); ++i) {
    ranked[i] = {squared_distance(rep, bank.representations[i]), i};
  }
  std::sort(ranked.begin(), ranked.end());

  PredictionSet pred;
  pred.scene_id = query.scene_id;
  std::size_t clamped_total = 0;
  for (std::size_t m = 0; m < k; ++m) {
    const std::size_t pick = (m < ranked.size() ? ranked[m] : ranked[0]).second;
    const CartesianPoint offset = view.history.back() - bank.last_observed[pick];
    std::vector<CartesianPoint> frame_future = bank.futures[pick];
    for (CartesianPoint& p : frame_future) p = p + offset;
    std::size_t clamped = 0;
    pred.trajectories.push_back(frame_to_cartesian(frame_future, query, view.plan, &clamped));
    clamped_total += clamped;
  }
  if (out_of_map != nullptr) *out_of_map = clamped_total;
  return pred;
}

BenchmarkResult run_benchmark(std::span<const Scene> scenes, const DomainSplit& split,
                              PredictorKind predictor, Frame frame, std::size_t modes,
                              Exec exec) {
  std::vector<std::size_t> train_idx, eval_idx;
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    const Scene& scene = scenes[i];
    const auto part = split.partition.find(scene.scene_id);
    if (part == split.partition.end()) {
      throw ValidationError("run_benchmark: scene \"" + scene.scene_id + "\" not in split");
    }
    if (part->second == Partition::train) {
      train_idx.push_back(i);
    } else {
      if (scene.future.empty()) {
        throw ValidationError("run_benchmark: evaluation scene \"" + scene.scene_id +
                              "\" has no ground-truth future");
      }
      eval_idx.push_back(i);
    }
  }
  bool have_val = false, have_test = false;
  for (std::size_t i : eval_idx) {
    const Partition p = split.partition.at(scenes[i].scene_id);
    have_val = have_val || p == Partition::val;
    have_test = have_test || p == Partition::test;
  }
  if (!have_val || !have_test) {
    throw ValidationError("run_benchmark: need non-empty val and test partitions");
  }

  NnBank bank;
  if (predictor == PredictorKind::nearest_neighbor) {
    std::vector<Scene> train;
    train.reserve(train_idx.size());
    for (std::size_t i : train_idx) train.push_back(scenes[i]);
    bank = build_nn_bank(train, frame, exec);
  }

  BenchmarkResult result;
  result.predictor = predictor;
  result.frame = frame;
  result.per_scene.resize(eval_idx.size());
  batch::for_each_index(eval_idx.size(), exec, [&](std::size_t slot) {
    const Scene& scene = scenes[eval_idx[slot]];
    SceneResult& sr = result.per_scene[slot];
    sr.scene_id = scene.scene_id;
    sr.domain = split.assignments.at(scene.scene_id);
    sr.partition = split.partition.at(scene.scene_id);

    PredictionSet pred;
    pred.scene_id = scene.scene_id;
    std::size_t clamped = 0;
    if (predictor == PredictorKind::constant_velocity) {
      const SceneFrameView view = make_frame_view(scene, frame);
      pred.trajectories.push_back(frame_to_cartesian(constant_velocity_predict(view.history),
                                                     scene, view.plan, &clamped));
    } else {
      FramePlan plan;
      plan.frame = frame;
      pred = nn_predict(scene, bank, modes, plan, &clamped);
    }
    sr.out_of_map_points = clamped;

    const std::vector<CartesianPoint> gt = points_of(scene.future);
    sr.min_ade = min_ade(pred, gt);
    sr.min_fde = min_fde(pred, gt);
  });

  // Fixed-order aggregation per group.
  struct Group {
    double ade_sum = 0.0;
    std::vector<double> fde;
  };
  Group seen, unseen;
  std::map<int, Group> by_domain;
  for (const SceneResult& sr : result.per_scene) {
    Group& g = sr.partition == Partition::val ? seen : unseen;
    g.ade_sum += sr.min_ade;
    g.fde.push_back(sr.min_fde);
    Group& d = by_domain[sr.domain];
    d.ade_sum += sr.min_ade;
    d.fde.push_back(sr.min_fde);
    result.out_of_map_points += sr.out_of_map_points;
  }
  const auto report = [](const std::string& name, const Group& g) {
    MetricsReport r;
    r.group = name;
    r.n_scenes = g.fde.size();
    r.min_ade = g.ade_sum / static_cast<double>(g.fde.size());
    double fde_sum = 0.0;
    for (double v : g.fde) fde_sum += v;
    r.min_fde = fde_sum / static_cast<double>(g.fde.size());
    r.miss_rate = miss_rate(g.fde);
    return r;
  };
  result.reports.push_back(report("seen-val", seen));
  result.reports.push_back(report("unseen-test", unseen));
  for (const auto& [domain, group] : by_domain) {
    result.reports.push_back(report("domain-" + std::to_string(domain), group));
  }
  result.unseen_vs_seen = degradation(result.reports[0], result.reports[1]);
  return result;
}

}  // namespace frenetkit
