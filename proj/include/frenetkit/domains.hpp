#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "frenetkit/scene.hpp"

namespace frenetkit {

inline constexpr std::size_t kFeatureCount = 21;

/// Per-scene descriptor: 21 raw geometry/kinematics features and their
/// 2-D embedding (filled by build_split).
struct FeatureVector {
  std::string scene_id;
  std::array<double, kFeatureCount> raw{};
  std::array<double, 2> embedded{};
};

/// The 21 features, in raw[] order:
///   reference-centerline geometry
///     0 length, 1 chord length, 2 sinuosity, 3 total |heading change|,
///     4 net heading change, 5 max per-vertex turn angle,
///     6 mean |discrete curvature|, 7 max |discrete curvature|,
///     8 curvature standard deviation, 9 bbox width, 10 bbox height,
///     11 vertex count
///   map context
///     12 candidate count, 13 mean pairwise candidate-endpoint distance,
///     14 min distance from agent start to any centerline,
///     15 mean lane-boundary offset (0, not in the scene format)
///   trajectory kinematics
///     16 mean speed, 17 max speed, 18 mean |heading change| of history,
///     19 net displacement, 20 mean |d| w.r.t. the selected reference
FeatureVector extract_features(const Scene& scene);

struct PcaModel {
  std::array<double, kFeatureCount> means{};
  std::array<double, kFeatureCount> scales{};
  std::array<std::array<double, kFeatureCount>, 2> basis{};  // orthonormal rows
  std::vector<double> eigenvalues;  // all, descending
};

struct PcaReduction {
  std::vector<std::array<double, 2>> embedded;
  PcaModel model;
};

/// Standardizes columns (zero-variance ones pass through with scale 1)
/// and projects onto the top-2 principal components. Component sign is
/// fixed so each basis vector's largest-magnitude entry is positive.
/// Requires N >= 3 rows.
PcaReduction pca_reduce(std::span<const std::array<double, kFeatureCount>> rows);

struct KMeansResult {
  std::vector<int> assignments;
  std::vector<std::array<double, 2>> centers;
  std::vector<double> wcss_history;  // per Lloyd iteration, after repair
  std::size_t iterations = 0;
};

/// Lloyd iterations from farthest-point seeding, deterministic given the
/// seed. Converges when no assignment changes or after 300 iterations;
/// empty clusters are re-seeded to the point farthest from its center.
KMeansResult kmeans(std::span<const std::array<double, 2>> points, std::size_t k,
                    std::uint64_t seed);

enum class Partition { train, val, test };

struct DomainSplit {
  std::map<std::string, int> assignments;        // scene_id -> cluster id
  std::vector<std::array<double, 2>> centers;    // indexed by cluster id
  std::set<int> seen_domains;
  std::set<int> unseen_domains;
  std::map<std::string, Partition> partition;
};

struct SplitOptions {
  std::size_t k = 10;
  std::size_t n_unseen = 3;
  std::uint64_t seed = 0;
};

/// Embeds, clusters, relabels clusters by descending member count (the
/// n_unseen smallest become the unseen domains), and splits seen scenes
/// train:val = 8:2 per domain by seeded shuffle. Fills each feature's
/// `embedded` coordinates in place.
DomainSplit build_split(std::span<FeatureVector> features, const SplitOptions& options);

/// Convenience overload extracting features first (serially).
DomainSplit build_split(std::span<const Scene> scenes, const SplitOptions& options,
                        std::vector<FeatureVector>* features_out = nullptr);

struct ScatterRow {
  std::string scene_id;
  int cluster = 0;
  double e1 = 0.0;
  double e2 = 0.0;
};

/// Numeric data behind the domain scatter figure, one row per scene.
std::vector<ScatterRow> emit_domain_scatter(const DomainSplit& split,
                                            std::span<const FeatureVector> features);

}  // namespace frenetkit
