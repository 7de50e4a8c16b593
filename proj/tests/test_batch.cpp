#include <doctest.h>

#include <vector>

#include "frenetkit/baselines.hpp"
#include "frenetkit/batch.hpp"
#include "frenetkit/domains.hpp"
#include "frenetkit/errors.hpp"
#include "frenetkit/synth.hpp"

using namespace frenetkit;
using namespace frenetkit::batch;

namespace {

SceneFile parity_corpus() {
  const std::vector<FamilySpec> families{{Family::straight, 30, 0, 0},
                                         {Family::arc, 16, 0, 0},
                                         {Family::s_curve, 12, 0, 0},
                                         {Family::right_turn, 12, 0, 0},
                                         {Family::roundabout_arc, 12, 0, 0}};
  return synthesize_corpus(1234, families, 0);
}

}  // namespace

TEST_CASE("worker exceptions propagate out of both drivers") {
  using frenetkit::ValidationError;
  for (const Exec exec : {Exec::serial, Exec::parallel}) {
    std::vector<int> touched(100, 0);
    CHECK_THROWS_AS(for_each_index(100, exec,
                                   [&](std::size_t i) {
                                     if (i == 37) throw ValidationError("boom at 37");
                                     touched[i] = 1;
                                   }),
                    ValidationError);
  }
  // The lowest-index failure wins, whatever the thread schedule.
  try {
    for_each_index(64, Exec::parallel, [](std::size_t i) {
      if (i % 2 == 1) throw frenetkit::ValidationError("odd " + std::to_string(i));
    });
    FAIL("expected ValidationError");
  } catch (const frenetkit::ValidationError& e) {
    CHECK(std::string(e.what()) == "odd 1");
  }
}

TEST_CASE("parallel transform tables are bit-identical to the serial reference") {
  const SceneFile corpus = parity_corpus();
  const auto serial = transform_corpus(corpus.records, Exec::serial);
  const auto parallel = transform_corpus(corpus.records, Exec::parallel);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].scene_id == parallel[i].scene_id);
    CHECK(serial[i].reference_index == parallel[i].reference_index);
    CHECK(serial[i].s1_raw == parallel[i].s1_raw);
    REQUIRE(serial[i].observed.size() == parallel[i].observed.size());
    for (std::size_t j = 0; j < serial[i].observed.size(); ++j) {
      CHECK(serial[i].observed[j].s == parallel[i].observed[j].s);
      CHECK(serial[i].observed[j].d == parallel[i].observed[j].d);
    }
    REQUIRE(serial[i].future.size() == parallel[i].future.size());
    for (std::size_t j = 0; j < serial[i].future.size(); ++j) {
      CHECK(serial[i].future[j].s == parallel[i].future[j].s);
      CHECK(serial[i].future[j].d == parallel[i].future[j].d);
    }
    // First observed point rebases to s = 0 exactly.
    CHECK(serial[i].observed.front().s == 0.0);
  }
}

TEST_CASE("parallel round-trip stats equal the serial reference exactly") {
  const SceneFile corpus = parity_corpus();
  const RoundTripStats serial = roundtrip_corpus(corpus.records, Exec::serial);
  const RoundTripStats parallel = roundtrip_corpus(corpus.records, Exec::parallel);
  CHECK(serial.mean_error == parallel.mean_error);
  CHECK(serial.max_error == parallel.max_error);
  CHECK(serial.n_points == parallel.n_points);
  CHECK(serial.n_scenes == parallel.n_scenes);
  CHECK(serial.mean_error <= 1e-4);
  CHECK(serial.max_error <= 1e-2);
}

TEST_CASE("parallel feature matrix is bit-identical to the serial reference") {
  const SceneFile corpus = parity_corpus();
  const auto serial = feature_matrix(corpus.records, Exec::serial);
  const auto parallel = feature_matrix(corpus.records, Exec::parallel);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].scene_id == parallel[i].scene_id);
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      CHECK(serial[i].raw[j] == parallel[i].raw[j]);
    }
  }
}

TEST_CASE("parallel error field is bit-identical to the serial reference") {
  const SceneFile corpus = parity_corpus();
  const Scene& scene = corpus.records[40];  // a curved-family scene
  const Polyline& ref = scene.centerlines[0];
  const CartesianPoint gt = scene.future[10].point;
  const ErrorFieldGrid serial = compute_error_field(gt, ref, 0.25, 4.0, Exec::serial);
  const ErrorFieldGrid parallel = compute_error_field(gt, ref, 0.25, 4.0, Exec::parallel);
  REQUIRE(serial.cells.size() == parallel.cells.size());
  CHECK(serial.excluded_count == parallel.excluded_count);
  for (std::size_t i = 0; i < serial.cells.size(); ++i) {
    if (serial.cells[i].excluded) {
      CHECK(parallel.cells[i].excluded);
      continue;
    }
    CHECK(serial.cells[i].cartesian_error == parallel.cells[i].cartesian_error);
    CHECK(serial.cells[i].frenet_error == parallel.cells[i].frenet_error);
    CHECK(serial.cells[i].difference == parallel.cells[i].difference);
  }
  // Center cell is exactly zero in all three layers.
  const ErrorFieldCell& center = serial.at(serial.side / 2, serial.side / 2);
  CHECK(center.cartesian_error == 0.0);
  CHECK(center.frenet_error == 0.0);
  CHECK(center.difference == 0.0);

  // Curved reference: the two frames disagree somewhere, but the gap
  // stays bounded.
  double max_abs_diff = 0.0;
  std::size_t nonzero = 0;
  for (const ErrorFieldCell& cell : serial.cells) {
    if (cell.excluded) continue;
    if (cell.difference != 0.0) ++nonzero;
    max_abs_diff = std::max(max_abs_diff, std::abs(cell.difference));
  }
  CHECK(nonzero > 0);
  CHECK(max_abs_diff < 2.0 * serial.half_extent);
}

TEST_CASE("parallel benchmark reports are bit-identical to the serial reference") {
  const SceneFile corpus = parity_corpus();
  std::vector<FeatureVector> features;
  const DomainSplit split = build_split(corpus.records, SplitOptions{8, 2, 3}, &features);
  for (const PredictorKind predictor :
       {PredictorKind::constant_velocity, PredictorKind::nearest_neighbor}) {
    for (const Frame frame : {Frame::cartesian, Frame::frenet}) {
      const BenchmarkResult serial =
          run_benchmark(corpus.records, split, predictor, frame, 6, Exec::serial);
      const BenchmarkResult parallel =
          run_benchmark(corpus.records, split, predictor, frame, 6, Exec::parallel);
      REQUIRE(serial.reports.size() == parallel.reports.size());
      for (std::size_t r = 0; r < serial.reports.size(); ++r) {
        CHECK(serial.reports[r].group == parallel.reports[r].group);
        CHECK(serial.reports[r].n_scenes == parallel.reports[r].n_scenes);
        CHECK(serial.reports[r].min_ade == parallel.reports[r].min_ade);
        CHECK(serial.reports[r].min_fde == parallel.reports[r].min_fde);
        CHECK(serial.reports[r].miss_rate == parallel.reports[r].miss_rate);
      }
      REQUIRE(serial.per_scene.size() == parallel.per_scene.size());
      for (std::size_t i = 0; i < serial.per_scene.size(); ++i) {
        CHECK(serial.per_scene[i].min_ade == parallel.per_scene[i].min_ade);
        CHECK(serial.per_scene[i].min_fde == parallel.per_scene[i].min_fde);
      }
      CHECK(serial.out_of_map_points == parallel.out_of_map_points);
    }
  }
}
