#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "frenetkit/batch.hpp"
#include "frenetkit/domains.hpp"
#include "frenetkit/metrics.hpp"
#include "frenetkit/scene.hpp"

namespace frenetkit {

inline constexpr std::size_t kVelocityWindowSteps = 5;
inline constexpr std::size_t kDefaultModes = 6;

/// Which coordinate frame the predictor sees. Scoring is always Cartesian.
enum class Frame { cartesian, frenet };

Frame frame_from_name(const std::string& name);
std::string frame_name(Frame frame);

enum class PredictorKind { constant_velocity, nearest_neighbor };

PredictorKind predictor_from_name(const std::string& name);
std::string predictor_name(PredictorKind kind);

/// How one scene's trajectories enter and leave the prediction frame.
struct FramePlan {
  Frame frame = Frame::cartesian;
  std::size_t reference_index = 0;  // selected centerline when frame == frenet
  double s1_raw = 0.0;              // recorded at transform time
};

/// One scene's history and future in the prediction frame, with the plan
/// needed to invert. Frenet views go through the scene's own selected
/// reference; Frenet (s, d) pairs are carried as 2-D points.
struct SceneFrameView {
  std::vector<CartesianPoint> history;
  std::vector<CartesianPoint> future;
  FramePlan plan;
};

SceneFrameView make_frame_view(const Scene& scene, Frame frame);

/// Maps predictor output back to the map frame; the identity for
/// Cartesian plans. Inverse-clamped points are counted in out_of_map.
std::vector<CartesianPoint> frame_to_cartesian(std::span<const CartesianPoint> frame_points,
                                               const Scene& scene, const FramePlan& plan,
                                               std::size_t* out_of_map = nullptr);

/// Extrapolates the mean velocity of the last kVelocityWindowSteps steps
/// linearly, in whichever 2-D frame the points are given.
std::vector<CartesianPoint> constant_velocity_predict(std::span<const CartesianPoint> observed,
                                                      std::size_t horizon = kHorizonSteps);

/// Retrieval bank for the nearest-neighbor baseline: per scene, the
/// flattened frame-coordinates of the history plus the future and last
/// observed point in the same frame.
struct NnBank {
  Frame frame = Frame::cartesian;
  std::vector<std::vector<double>> representations;  // 2 * kObservedSteps each
  std::vector<std::vector<CartesianPoint>> futures;  // frame coordinates
  std::vector<CartesianPoint> last_observed;         // frame coordinates
  std::vector<std::string> scene_ids;
};

/// Builds the bank from scenes with futures; frenet banks transform each
/// scene through its own selected reference.
NnBank build_nn_bank(std::span<const Scene> bank_scenes, Frame frame, Exec exec);

/// Futures of the k nearest bank scenes by history distance, each
/// translated so it continues from the query's last observed point.
/// Banks smaller than k are padded by repeating the nearest. For frenet
/// plans the outputs are inverse-transformed to Cartesian coordinates;
/// points clamped at the path extent are counted in out_of_map.
PredictionSet nn_predict(const Scene& query, const NnBank& bank, std::size_t k,
                         const FramePlan& plan, std::size_t* out_of_map = nullptr);

struct SceneResult {
  std::string scene_id;
  int domain = 0;
  Partition partition = Partition::val;
  double min_ade = 0.0;
  double min_fde = 0.0;
  std::size_t out_of_map_points = 0;  // prediction points inverse-clamped
};

struct BenchmarkResult {
  PredictorKind predictor = PredictorKind::constant_velocity;
  Frame frame = Frame::cartesian;
  std::vector<MetricsReport> reports;  // seen-val, unseen-test, then per domain
  Degradation unseen_vs_seen;
  std::vector<SceneResult> per_scene;  // evaluation scenes, input order
  std::size_t out_of_map_points = 0;
};

/// Evaluates val (seen) and test (unseen) scenes with the chosen predictor
/// and frame. The NN bank is the train partition. Frenet predictions are
/// inverse-transformed (clamped at the path extent, tallied) before
/// scoring in Cartesian coordinates.
BenchmarkResult run_benchmark(std::span<const Scene> scenes, const DomainSplit& split,
                              PredictorKind predictor, Frame frame,
                              std::size_t modes = kDefaultModes, Exec exec = Exec::parallel);

}  // namespace frenetkit
