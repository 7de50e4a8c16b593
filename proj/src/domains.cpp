#include "frenetkit/domains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "frenetkit/errors.hpp"
#include "frenetkit/reference.hpp"
#include "frenetkit/rng.hpp"

namespace frenetkit {
namespace {

double turn_angle(CartesianPoint from_dir, CartesianPoint to_dir) {
  return std::atan2(cross(from_dir, to_dir), dot(from_dir, to_dir));
}

// Symmetric eigendecomposition by cyclic Jacobi rotations. `a` is
// destroyed; its diagonal holds the eigenvalues, the columns of `vecs`
// the eigenvectors.
void jacobi_eigen(std::vector<std::vector<double>>& a, std::vector<std::vector<double>>& vecs) {
  const std::size_t n = a.size();
  vecs.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) vecs[i][i] = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-24) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a[i][p];
          const double aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double api = a[p][i];
          const double aqi = a[q][i];
          a[p][i] = c * api - s * aqi;
          a[q][i] = s * api + c * aqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = vecs[i][p];
          const double viq = vecs[i][q];
          vecs[i][p] = c * vip - s * viq;
          vecs[i][q] = s * vip + c * viq;
        }
      }
    }
  }
}

std::vector<double> speeds_of(const std::vector<TimedPoint>& observed) {
  std::vector<double> out;
  out.reserve(observed.size() - 1);
  for (std::size_t i = 1; i < observed.size(); ++i) {
    const double dt = observed[i].t - observed[i - 1].t;
    out.push_back(distance(observed[i].point, observed[i - 1].point) / dt);
  }
  return out;
}

std::size_t count_distinct(std::span<const std::array<double, 2>> points) {
  std::vector<std::array<double, 2>> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

std::string sizes_to_string(std::span<const std::size_t> sizes) {
  std::string out = "[";
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(sizes[i]);
  }
  return out + "]";
}

}  // namespace

FeatureVector extract_features(const Scene& scene) {
  if (scene.observed.size() < 2) {
    throw ValidationError("extract_features: scene \"" + scene.scene_id +
                          "\" needs >= 2 observed points");
  }
  if (scene.centerlines.empty()) {
    throw ValidationError("extract_features: scene \"" + scene.scene_id + "\" has no centerline");
  }
  const std::vector<CartesianPoint> history = points_of(scene.observed);
  const ReferenceSelection sel = select_reference(history, scene.centerlines);
  const Polyline& ref = scene.centerlines[sel.index];

  FeatureVector fv;
  fv.scene_id = scene.scene_id;
  auto& f = fv.raw;

  // Reference-centerline geometry.
  const double length = ref.total_length();
  const double chord = distance(ref.vertices().front(), ref.vertices().back());
  f[0] = length;
  f[1] = chord;
  f[2] = length / std::max(chord, 1e-9);
  double total_turn = 0.0, net_turn = 0.0, max_turn = 0.0;
  std::vector<double> curvatures;
  for (std::size_t j = 1; j < ref.segment_count(); ++j) {
    const double turn = turn_angle(ref.segment_dir(j - 1), ref.segment_dir(j));
    total_turn += std::abs(turn);
    net_turn += turn;
    max_turn = std::max(max_turn, std::abs(turn));
    curvatures.push_back(turn / (0.5 * (ref.segment_length(j - 1) + ref.segment_length(j))));
  }
  f[3] = total_turn;
  f[4] = net_turn;
  f[5] = max_turn;
  if (!curvatures.empty()) {
    double abs_sum = 0.0, sum = 0.0, max_abs = 0.0;
    for (double k : curvatures) {
      abs_sum += std::abs(k);
      sum += k;
      max_abs = std::max(max_abs, std::abs(k));
    }
    const double n = static_cast<double>(curvatures.size());
    const double mean = sum / n;
    double var = 0.0;
    for (double k : curvatures) var += (k - mean) * (k - mean);
    f[6] = abs_sum / n;
    f[7] = max_abs;
    f[8] = std::sqrt(var / n);
  }
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for (const CartesianPoint& v : ref.vertices()) {
    min_x = std::min(min_x, v.x);
    max_x = std::max(max_x, v.x);
    min_y = std::min(min_y, v.y);
    max_y = std::max(max_y, v.y);
  }
  f[9] = max_x - min_x;
  f[10] = max_y - min_y;
  f[11] = static_cast<double>(ref.vertices().size());

  // Map context.
  f[12] = static_cast<double>(scene.centerlines.size());
  double endpoint_sum = 0.0;
  std::size_t endpoint_pairs = 0;
  for (std::size_t a = 0; a < scene.centerlines.size(); ++a) {
    for (std::size_t b = a + 1; b < scene.centerlines.size(); ++b) {
      endpoint_sum += distance(scene.centerlines[a].vertices().back(),
                               scene.centerlines[b].vertices().back());
      ++endpoint_pairs;
    }
  }
  f[13] = endpoint_pairs > 0 ? endpoint_sum / static_cast<double>(endpoint_pairs) : 0.0;
  double min_start_dist = std::numeric_limits<double>::infinity();
  for (const Polyline& line : scene.centerlines) {
    min_start_dist =
        std::min(min_start_dist, project_point_to_polyline(history.front(), line).distance);
  }
  f[14] = min_start_dist;
  f[15] = 0.0;  // lane boundaries are not part of the scene format

  // Trajectory kinematics.
  const std::vector<double> speeds = speeds_of(scene.observed);
  f[16] = std::accumulate(speeds.begin(), speeds.end(), 0.0) / static_cast<double>(speeds.size());
  f[17] = *std::max_element(speeds.begin(), speeds.end());
  double heading_change_sum = 0.0;
  std::size_t heading_changes = 0;
  CartesianPoint prev_step{0.0, 0.0};
  bool have_prev = false;
  for (std::size_t i = 1; i < history.size(); ++i) {
    const CartesianPoint step = history[i] - history[i - 1];
    if (norm(step) < 1e-9) continue;
    if (have_prev) {
      heading_change_sum += std::abs(turn_angle(prev_step, step));
      ++heading_changes;
    }
    prev_step = step;
    have_prev = true;
  }
  f[18] = heading_changes > 0 ? heading_change_sum / static_cast<double>(heading_changes) : 0.0;
  f[19] = distance(history.back(), history.front());
  double abs_d_sum = 0.0;
  for (const CartesianPoint& p : history) abs_d_sum += std::abs(to_frenet_raw(p, ref).d);
  f[20] = abs_d_sum / static_cast<double>(history.size());

  return fv;
}

PcaReduction pca_reduce(std::span<const std::array<double, kFeatureCount>> rows) {
  const std::size_t n = rows.size();
  if (n < 3) {
    throw ValidationError("pca_reduce: need >= 3 rows, got " + std::to_string(n));
  }
  PcaReduction out;
  PcaModel& model = out.model;
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += rows[i][j];
    model.means[j] = sum / static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = rows[i][j] - model.means[j];
      var += c * c;
    }
    const double stddev = std::sqrt(var / static_cast<double>(n));
    model.scales[j] = stddev < 1e-12 ? 1.0 : stddev;
  }

  std::vector<std::array<double, kFeatureCount>> z(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < kFeatureCount; ++j)
      z[i][j] = (rows[i][j] - model.means[j]) / model.scales[j];

  std::vector<std::vector<double>> cov(kFeatureCount, std::vector<double>(kFeatureCount, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = 0; p < kFeatureCount; ++p)
      for (std::size_t q = p; q < kFeatureCount; ++q) cov[p][q] += z[i][p] * z[i][q];
  for (std::size_t p = 0; p < kFeatureCount; ++p)
    for (std::size_t q = p; q < kFeatureCount; ++q) {
      cov[p][q] /= static_cast<double>(n - 1);
      cov[q][p] = cov[p][q];
    }

  std::vector<std::vector<double>> vecs;
  jacobi_eigen(cov, vecs);
  std::vector<std::size_t> order(kFeatureCount);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cov[a][a] > cov[b][b]; });
  model.eigenvalues.reserve(kFeatureCount);
  for (std::size_t idx : order) model.eigenvalues.push_back(cov[idx][idx]);

  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) model.basis[r][j] = vecs[j][order[r]];
    std::size_t arg = 0;
    for (std::size_t j = 1; j < kFeatureCount; ++j) {
      if (std::abs(model.basis[r][j]) > std::abs(model.basis[r][arg])) arg = j;
    }
    if (model.basis[r][arg] < 0.0) {
      for (double& v : model.basis[r]) v = -v;
    }
  }

  out.embedded.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < 2; ++r) {
      double acc = 0.0;
      for (std::size_t j = 0; j < kFeatureCount; ++j) acc += z[i][j] * model.basis[r][j];
      out.embedded[i][r] = acc;
    }
  }
  return out;
}

KMeansResult kmeans(std::span<const std::array<double, 2>> points, std::size_t k,
                    std::uint64_t seed) {
  const std::size_t n = points.size();
  if (k < 1 || n < k) {
    throw ValidationError("kmeans: need N >= k >= 1, got N=" + std::to_string(n) +
                          " k=" + std::to_string(k));
  }
  const auto dist2 = [](const std::array<double, 2>& a, const std::array<double, 2>& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return dx * dx + dy * dy;
  };

  KMeansResult result;
  result.centers.reserve(k);
  Rng rng(seed);
  result.centers.push_back(points[rng.below(n)]);
  std::vector<double> min_d2(n);
  for (std::size_t i = 0; i < n; ++i) min_d2[i] = dist2(points[i], result.centers[0]);
  while (result.centers.size() < k) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (min_d2[i] > min_d2[far]) far = i;
    }
    result.centers.push_back(points[far]);
    for (std::size_t i = 0; i < n; ++i)
      min_d2[i] = std::min(min_d2[i], dist2(points[i], result.centers.back()));
  }

  result.assignments.assign(n, -1);
  std::vector<int> previous(n, -1);
  for (std::size_t iter = 0; iter < 300; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d2 = dist2(points[i], result.centers[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double d2 = dist2(points[i], result.centers[c]);
        if (d2 < best_d2) {
          best = static_cast<int>(c);
          best_d2 = d2;
        }
      }
      if (result.assignments[i] != best) changed = true;
      result.assignments[i] = best;
    }

    std::vector<std::size_t> counts(k, 0);
    for (int a : result.assignments) ++counts[static_cast<std::size_t>(a)];
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      // Re-seed onto the point farthest from its center, taken from a
      // cluster that can spare a member.
      std::size_t far = n;
      double far_d2 = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t owner = static_cast<std::size_t>(result.assignments[i]);
        if (counts[owner] < 2) continue;
        const double d2 = dist2(points[i], result.centers[owner]);
        if (d2 > far_d2) {
          far = i;
          far_d2 = d2;
        }
      }
      --counts[static_cast<std::size_t>(result.assignments[far])];
      result.centers[c] = points[far];
      result.assignments[far] = static_cast<int>(c);
      counts[c] = 1;
      changed = true;
    }

    double wcss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      wcss += dist2(points[i], result.centers[static_cast<std::size_t>(result.assignments[i])]);
    }
    result.wcss_history.push_back(wcss);
    result.iterations = iter + 1;
    if (!changed && result.assignments == previous) break;
    previous = result.assignments;

    std::vector<std::array<double, 2>> sums(k, {0.0, 0.0});
    std::vector<std::size_t> counts2(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(result.assignments[i]);
      sums[c][0] += points[i][0];
      sums[c][1] += points[i][1];
      ++counts2[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
      result.centers[c] = {sums[c][0] / static_cast<double>(counts2[c]),
                           sums[c][1] / static_cast<double>(counts2[c])};
    }
  }

  // Final centers are the centroids of the converged assignment.
  std::vector<std::array<double, 2>> sums(k, {0.0, 0.0});
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(result.assignments[i]);
    sums[c][0] += points[i][0];
    sums[c][1] += points[i][1];
    ++counts[c];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] > 0) {
      result.centers[c] = {sums[c][0] / static_cast<double>(counts[c]),
                           sums[c][1] / static_cast<double>(counts[c])};
    }
  }
  return result;
}

DomainSplit build_split(std::span<FeatureVector> features, const SplitOptions& options) {
  const std::size_t n = features.size();
  if (options.k < 1 || options.n_unseen >= options.k) {
    throw ValidationError("build_split: need k >= 1 and n_unseen < k");
  }
  if (n < options.k) {
    throw ValidationError("build_split: " + std::to_string(n) + " scenes cannot fill " +
                          std::to_string(options.k) + " clusters");
  }

  std::vector<std::array<double, kFeatureCount>> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = features[i].raw;
  PcaReduction reduction = pca_reduce(rows);
  for (std::size_t i = 0; i < n; ++i) features[i].embedded = reduction.embedded[i];

  const std::size_t distinct = count_distinct(reduction.embedded);
  if (distinct < options.k) {
    std::vector<std::size_t> sizes(options.k, 0);
    sizes[0] = n - (distinct - 1);
    for (std::size_t i = 1; i < distinct; ++i) sizes[i] = 1;
    throw ValidationError("build_split: degenerate embedding, only " + std::to_string(distinct) +
                          " distinct points for " + std::to_string(options.k) +
                          " clusters; cluster sizes " + sizes_to_string(sizes));
  }

  const KMeansResult km = kmeans(reduction.embedded, options.k, options.seed);
  std::vector<std::size_t> counts(options.k, 0);
  for (int a : km.assignments) ++counts[static_cast<std::size_t>(a)];
  for (std::size_t c = 0; c < options.k; ++c) {
    if (counts[c] == 0) {
      throw ValidationError("build_split: empty cluster " + std::to_string(c) +
                            "; cluster sizes " + sizes_to_string(counts));
    }
  }

  // Relabel clusters by descending size; the n_unseen smallest become the
  // unseen domains.
  std::vector<std::size_t> order(options.k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });
  std::vector<int> relabel(options.k);
  for (std::size_t rank = 0; rank < options.k; ++rank) {
    relabel[order[rank]] = static_cast<int>(rank);
  }

  DomainSplit split;
  split.centers.resize(options.k);
  for (std::size_t c = 0; c < options.k; ++c) split.centers[relabel[c]] = km.centers[c];
  for (std::size_t i = 0; i < n; ++i) {
    split.assignments[features[i].scene_id] = relabel[static_cast<std::size_t>(km.assignments[i])];
  }
  const std::size_t n_seen = options.k - options.n_unseen;
  for (std::size_t c = 0; c < options.k; ++c) {
    (c < n_seen ? split.seen_domains : split.unseen_domains).insert(static_cast<int>(c));
  }

  std::vector<std::vector<std::string>> members(options.k);
  for (const FeatureVector& fv : features) {
    members[static_cast<std::size_t>(split.assignments.at(fv.scene_id))].push_back(fv.scene_id);
  }
  Rng rng(options.seed);
  for (std::size_t c = 0; c < options.k; ++c) {
    if (c >= n_seen) {
      for (const std::string& id : members[c]) split.partition[id] = Partition::test;
      continue;
    }
    std::vector<std::string>& ids = members[c];
    for (std::size_t i = ids.size(); i > 1; --i) {
      std::swap(ids[i - 1], ids[rng.below(i)]);
    }
    const auto n_train = static_cast<std::size_t>(
        std::llround(0.8 * static_cast<double>(ids.size())));
    for (std::size_t i = 0; i < ids.size(); ++i) {
      split.partition[ids[i]] = i < n_train ? Partition::train : Partition::val;
    }
  }
  return split;
}

DomainSplit build_split(std::span<const Scene> scenes, const SplitOptions& options,
                        std::vector<FeatureVector>* features_out) {
  std::vector<FeatureVector> features;
  features.reserve(scenes.size());
  for (const Scene& scene : scenes) features.push_back(extract_features(scene));
  DomainSplit split = build_split(std::span<FeatureVector>(features), options);
  if (features_out != nullptr) *features_out = std::move(features);
  return split;
}

std::vector<ScatterRow> emit_domain_scatter(const DomainSplit& split,
                                            std::span<const FeatureVector> features) {
  std::vector<ScatterRow> rows;
  rows.reserve(features.size());
  for (const FeatureVector& fv : features) {
    const auto it = split.assignments.find(fv.scene_id);
    if (it == split.assignments.end()) {
      throw ValidationError("emit_domain_scatter: scene \"" + fv.scene_id + "\" not in split");
    }
    rows.push_back({fv.scene_id, it->second, fv.embedded[0], fv.embedded[1]});
  }
  return rows;
}

}  // namespace frenetkit
