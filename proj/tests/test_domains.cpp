#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "frenetkit/domains.hpp"
#include "frenetkit/errors.hpp"
#include "frenetkit/rng.hpp"
#include "oracles.hpp"
#include "scene_builders.hpp"

using namespace frenetkit;

namespace {

// Feature rows whose only informative coordinates are dims 0 and 1.
std::vector<FeatureVector> planted_features(const oracles::LabeledPoints& blobs) {
  std::vector<FeatureVector> features(blobs.points.size());
  for (std::size_t i = 0; i < blobs.points.size(); ++i) {
    features[i].scene_id = "scene-" + std::to_string(i);
    features[i].raw[0] = blobs.points[i][0];
    features[i].raw[1] = blobs.points[i][1];
  }
  return features;
}

Eigen::MatrixXd standardized(const std::vector<std::array<double, kFeatureCount>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, kFeatureCount);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(kFeatureCount); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double mean = m.col(j).mean();
    m.col(j).array() -= mean;
    const double stddev = std::sqrt(m.col(j).squaredNorm() / static_cast<double>(n));
    if (stddev >= 1e-12) m.col(j) /= stddev;
  }
  return m;
}

}  // namespace

TEST_CASE("features: straight road, quarter circle, agent at rest") {
  const Scene straight =
      builders::scene_on_path(builders::straight_vertices(100.0), 10.0, 3.0, false);
  const FeatureVector fs = extract_features(straight);
  CHECK(fs.raw[3] == 0.0);                                // total heading change
  CHECK(fs.raw[2] == doctest::Approx(1.0).epsilon(1e-12));  // sinuosity
  CHECK(fs.raw[16] == doctest::Approx(10.0).epsilon(1e-9));

  // Independent oracle: sum of turn angles over the discretized arc.
  const auto arc = builders::arc_vertices(40.0, std::numbers::pi / 2.0, 2000);
  double oracle_turn = 0.0;
  for (std::size_t i = 2; i < arc.size(); ++i) {
    const CartesianPoint u = arc[i - 1] - arc[i - 2];
    const CartesianPoint v = arc[i] - arc[i - 1];
    oracle_turn += std::abs(std::atan2(cross(u, v), dot(u, v)));
  }
  Scene curved = builders::scene_on_path(arc, 5.0, 3.0, false);
  const FeatureVector fc = extract_features(curved);
  CHECK(fc.raw[3] == doctest::Approx(oracle_turn).epsilon(1e-9));
  CHECK(fc.raw[3] == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-3));

  const Scene rest = builders::scene_at_rest({5.0, 2.0});
  const FeatureVector fr = extract_features(rest);
  CHECK(fr.raw[16] == 0.0);  // mean speed
  CHECK(fr.raw[19] == 0.0);  // net displacement

  Scene no_lines = rest;
  no_lines.centerlines.clear();
  CHECK_THROWS_AS(extract_features(no_lines), ValidationError);
}

TEST_CASE("pca: exact low-rank data is recovered") {
  Rng rng(2);
  std::vector<std::array<double, kFeatureCount>> rows(200);
  for (auto& row : rows) {
    row.fill(0.0);
    row[0] = rng.uniform(-3, 3);
    row[1] = 2.0 * row[0] + rng.uniform(-2, 2);
  }
  const PcaReduction red = pca_reduce(rows);
  // Reconstructing the standardized matrix through the 2-row basis is
  // lossless for rank-2 data.
  const Eigen::MatrixXd z = standardized(rows);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      const double rebuilt = red.embedded[i][0] * red.model.basis[0][j] +
                             red.embedded[i][1] * red.model.basis[1][j];
      CHECK(std::abs(rebuilt - z(static_cast<Eigen::Index>(i),
                                 static_cast<Eigen::Index>(j))) < 1e-9);
    }
  }
  CHECK_THROWS_AS(
      pca_reduce(std::vector<std::array<double, kFeatureCount>>(2)), ValidationError);
}

TEST_CASE("pca: eigenvalues match an independent solver") {
  Rng rng(14);
  std::vector<std::array<double, kFeatureCount>> rows(500);
  for (auto& row : rows) {
    // Correlated mixture so the spectrum is well separated.
    const double a = rng.normal(0, 3), b = rng.normal(0, 2), c = rng.normal(0, 1);
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      row[j] = a * std::sin(0.3 * static_cast<double>(j)) +
               b * std::cos(0.7 * static_cast<double>(j)) +
               c * static_cast<double>(j % 3) + rng.normal(0, 0.3);
    }
  }
  const PcaReduction red = pca_reduce(rows);

  const Eigen::MatrixXd z = standardized(rows);
  const Eigen::MatrixXd cov =
      (z.transpose() * z) / static_cast<double>(rows.size() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  REQUIRE(solver.info() == Eigen::Success);
  Eigen::VectorXd lambda = solver.eigenvalues().reverse();
  for (std::size_t r = 0; r < kFeatureCount; ++r) {
    CHECK(red.model.eigenvalues[r] ==
          doctest::Approx(lambda(static_cast<Eigen::Index>(r))).epsilon(1e-8));
  }
  // The top-2 eigenvectors agree up to sign.
  for (std::size_t r = 0; r < 2; ++r) {
    const Eigen::VectorXd v = solver.eigenvectors().col(
        static_cast<Eigen::Index>(kFeatureCount - 1 - r));
    double dot_abs = 0.0;
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      dot_abs += red.model.basis[r][j] * v(static_cast<Eigen::Index>(j));
    }
    CHECK(std::abs(dot_abs) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("pca: isotropic noise spreads variance evenly") {
  Rng rng(6);
  std::vector<std::array<double, kFeatureCount>> rows(8000);
  for (auto& row : rows)
    for (double& v : row) v = rng.normal(0.0, 1.0);
  const PcaReduction red = pca_reduce(rows);
  double total = 0.0;
  for (double ev : red.model.eigenvalues) total += ev;
  const double evr2 = (red.model.eigenvalues[0] + red.model.eigenvalues[1]) / total;
  CHECK(evr2 == doctest::Approx(2.0 / 21.0).epsilon(0.25));
  CHECK(std::abs(evr2 - 2.0 / 21.0) < 0.02);
}

TEST_CASE("pca: duplicate rows embed identically; variance never grows") {
  Rng rng(10);
  std::vector<std::array<double, kFeatureCount>> rows(50);
  for (auto& row : rows)
    for (double& v : row) v = rng.uniform(-1, 1);
  rows[20] = rows[3];
  const PcaReduction red = pca_reduce(rows);
  CHECK(red.embedded[20][0] == red.embedded[3][0]);
  CHECK(red.embedded[20][1] == red.embedded[3][1]);

  // Per-column variance of the reconstruction never exceeds the
  // standardized original's.
  const Eigen::MatrixXd z = standardized(rows);
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    double var_rebuilt = 0.0, mean = 0.0;
    std::vector<double> col(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      col[i] = red.embedded[i][0] * red.model.basis[0][j] +
               red.embedded[i][1] * red.model.basis[1][j];
      mean += col[i];
    }
    mean /= static_cast<double>(rows.size());
    for (double v : col) var_rebuilt += (v - mean) * (v - mean);
    var_rebuilt /= static_cast<double>(rows.size());
    const double var_orig =
        z.col(static_cast<Eigen::Index>(j)).squaredNorm() / static_cast<double>(rows.size());
    CHECK(var_rebuilt <= var_orig + 1e-9);
  }
}

TEST_CASE("kmeans: centroid, separation, purity, monotone objective") {
  Rng rng(1);
  std::vector<std::array<double, 2>> pts;
  for (int i = 0; i < 40; ++i) pts.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5)});
  const KMeansResult single = kmeans(pts, 1, 7);
  double cx = 0.0, cy = 0.0;
  for (const auto& p : pts) {
    cx += p[0];
    cy += p[1];
  }
  CHECK(single.centers[0][0] == doctest::Approx(cx / 40.0).epsilon(1e-12));
  CHECK(single.centers[0][1] == doctest::Approx(cy / 40.0).epsilon(1e-12));

  const oracles::LabeledPoints two = oracles::make_blobs(rng, 2, 50, 70.0, 1.0);
  const KMeansResult r2 = kmeans(two.points, 2, 7);
  CHECK(oracles::purity(r2.assignments, two.labels, 2) == 1.0);

  const oracles::LabeledPoints ten = oracles::make_blobs(rng, 10, 60, 100.0, 1.0);
  const KMeansResult r10 = kmeans(ten.points, 10, 7);
  CHECK(oracles::purity(r10.assignments, ten.labels, 10) >= 0.95);
  for (std::size_t i = 1; i < r10.wcss_history.size(); ++i) {
    CHECK(r10.wcss_history[i] <= r10.wcss_history[i - 1] + 1e-9);
  }

  CHECK_THROWS_AS(kmeans(std::vector<std::array<double, 2>>(3), 4, 0), ValidationError);
}

TEST_CASE("build_split: structure, soundness, ratios, determinism") {
  Rng rng(23);
  oracles::LabeledPoints blobs;
  std::vector<int> group_sizes;
  // Ten groups with distinct sizes so the size-ordering is unambiguous.
  for (int g = 0; g < 10; ++g) {
    const int size = 30 + 6 * g;
    group_sizes.push_back(size);
    const double angle = 0.628318 * g;
    for (int i = 0; i < size; ++i) {
      blobs.points.push_back({100.0 * std::cos(angle) + rng.normal(0, 0.8),
                              100.0 * std::sin(angle) + rng.normal(0, 0.8)});
      blobs.labels.push_back(g);
    }
  }
  std::vector<FeatureVector> features = planted_features(blobs);
  const SplitOptions options{10, 3, 99};
  const DomainSplit split = build_split(std::span<FeatureVector>(features), options);

  CHECK(split.seen_domains == std::set<int>{0, 1, 2, 3, 4, 5, 6});
  CHECK(split.unseen_domains == std::set<int>{7, 8, 9});

  // Cluster ids are ordered by descending size.
  std::map<int, int> cluster_sizes;
  for (const auto& [id, cluster] : split.assignments) ++cluster_sizes[cluster];
  for (int c = 1; c < 10; ++c) CHECK(cluster_sizes[c] <= cluster_sizes[c - 1]);

  // Partition soundness: classes disjoint and exhaustive; unseen scenes
  // only in test; train:val is 8:2 within one scene per domain.
  std::map<int, int> train_per_domain, val_per_domain;
  for (const auto& [id, part] : split.partition) {
    const int cluster = split.assignments.at(id);
    if (part == Partition::test) {
      CHECK(split.unseen_domains.count(cluster) == 1);
    } else {
      CHECK(split.seen_domains.count(cluster) == 1);
      ++(part == Partition::train ? train_per_domain : val_per_domain)[cluster];
    }
  }
  CHECK(split.partition.size() == features.size());
  for (const auto& [domain, n_train] : train_per_domain) {
    const int n = n_train + val_per_domain[domain];
    CHECK(std::abs(0.8 * n - n_train) <= 1.0);
  }

  std::vector<FeatureVector> features2 = planted_features(blobs);
  const DomainSplit split2 = build_split(std::span<FeatureVector>(features2), options);
  CHECK(split2.assignments == split.assignments);
  CHECK(split2.partition == split.partition);
  for (std::size_t i = 0; i < features.size(); ++i) {
    CHECK(features2[i].embedded == features[i].embedded);
  }
}

TEST_CASE("build_split rejects a degenerate embedding, naming cluster sizes") {
  std::vector<FeatureVector> features(100);
  for (std::size_t i = 0; i < features.size(); ++i) {
    features[i].scene_id = "dup-" + std::to_string(i);
    features[i].raw.fill(1.0);
  }
  try {
    build_split(std::span<FeatureVector>(features), SplitOptions{10, 3, 1});
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("cluster sizes") != std::string::npos);
  }
}

TEST_CASE("domain scatter rows mirror the split") {
  Rng rng(44);
  const oracles::LabeledPoints blobs = oracles::make_blobs(rng, 4, 10, 60.0, 0.5);
  std::vector<FeatureVector> features = planted_features(blobs);
  const DomainSplit split = build_split(std::span<FeatureVector>(features), SplitOptions{4, 1, 5});
  const std::vector<ScatterRow> rows = emit_domain_scatter(split, features);
  REQUIRE(rows.size() == features.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].cluster == split.assignments.at(rows[i].scene_id));
    CHECK(rows[i].e1 == features[i].embedded[0]);
    CHECK(rows[i].e2 == features[i].embedded[1]);
  }
  // All pairwise inter-domain center distances are positive.
  for (std::size_t a = 0; a < split.centers.size(); ++a) {
    for (std::size_t b = a + 1; b < split.centers.size(); ++b) {
      const double dx = split.centers[a][0] - split.centers[b][0];
      const double dy = split.centers[a][1] - split.centers[b][1];
      CHECK(dx * dx + dy * dy > 0.0);
    }
  }
}
