// Times each corpus kernel in serial and OpenMP form and verifies the
// outputs match bit-for-bit.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "frenetkit/baselines.hpp"
#include "frenetkit/batch.hpp"
#include "frenetkit/domains.hpp"
#include "frenetkit/synth.hpp"

using namespace frenetkit;
using Clock = std::chrono::steady_clock;

namespace {

template <typename Fn>
double time_ms(std::size_t reps, Fn&& fn) {
  double best = 1e300;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto start = Clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double, std::milli>(Clock::now() - start).count());
  }
  return best;
}

bool same_tables(const std::vector<batch::SceneFrenetTable>& a,
                 const std::vector<batch::SceneFrenetTable>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].s1_raw != b[i].s1_raw || a[i].reference_index != b[i].reference_index) return false;
    for (std::size_t j = 0; j < a[i].observed.size(); ++j) {
      if (a[i].observed[j].s != b[i].observed[j].s || a[i].observed[j].d != b[i].observed[j].d)
        return false;
    }
    for (std::size_t j = 0; j < a[i].future.size(); ++j) {
      if (a[i].future[j].s != b[i].future[j].s || a[i].future[j].d != b[i].future[j].d)
        return false;
    }
  }
  return true;
}

bool same_features(const std::vector<FeatureVector>& a, const std::vector<FeatureVector>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].raw != b[i].raw) return false;
  }
  return true;
}

bool same_benchmark(const BenchmarkResult& a, const BenchmarkResult& b) {
  if (a.reports.size() != b.reports.size()) return false;
  for (std::size_t r = 0; r < a.reports.size(); ++r) {
    if (a.reports[r].min_ade != b.reports[r].min_ade ||
        a.reports[r].min_fde != b.reports[r].min_fde ||
        a.reports[r].miss_rate != b.reports[r].miss_rate)
      return false;
  }
  return true;
}

void report(const char* kernel, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-22s %10.1f ms %10.1f ms %7.2fx   %s\n", kernel, serial_ms, parallel_ms,
              serial_ms / parallel_ms, identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial-vs-OpenMP kernel benchmark"};
  std::size_t n_scenes = 4000;
  std::size_t reps = 3;
  std::uint64_t seed = 7;
  app.add_option("--scenes", n_scenes, "Corpus size");
  app.add_option("--reps", reps, "Repetitions (best time reported)");
  app.add_option("--seed", seed, "Corpus seed");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const std::size_t per = n_scenes / 5;
  const std::vector<FamilySpec> families{{Family::straight, n_scenes - 4 * per, 0, 0},
                                         {Family::arc, per, 0, 0},
                                         {Family::s_curve, per, 0, 0},
                                         {Family::right_turn, per, 0, 0},
                                         {Family::roundabout_arc, per, 0, 0}};
  const SceneFile corpus = synthesize_corpus(seed, families, per);
#ifdef _OPENMP
  std::printf("threads=%d scenes=%zu reps=%zu\n", omp_get_max_threads(), corpus.records.size(),
              reps);
#else
  std::printf("threads=1 (OpenMP disabled) scenes=%zu reps=%zu\n", corpus.records.size(), reps);
#endif
  std::printf("%-22s %13s %13s %8s   %s\n", "kernel", "serial", "parallel", "speedup", "outputs");

  {
    std::vector<batch::SceneFrenetTable> s, p;
    const double t_s =
        time_ms(reps, [&] { s = batch::transform_corpus(corpus.records, Exec::serial); });
    const double t_p =
        time_ms(reps, [&] { p = batch::transform_corpus(corpus.records, Exec::parallel); });
    report("transform_corpus", t_s, t_p, same_tables(s, p));
  }
  {
    batch::RoundTripStats s, p;
    const double t_s =
        time_ms(reps, [&] { s = batch::roundtrip_corpus(corpus.records, Exec::serial); });
    const double t_p =
        time_ms(reps, [&] { p = batch::roundtrip_corpus(corpus.records, Exec::parallel); });
    report("roundtrip_corpus", t_s, t_p,
           s.mean_error == p.mean_error && s.max_error == p.max_error &&
               s.n_points == p.n_points);
  }
  std::vector<FeatureVector> features;
  {
    std::vector<FeatureVector> s;
    const double t_s =
        time_ms(reps, [&] { s = batch::feature_matrix(corpus.records, Exec::serial); });
    const double t_p =
        time_ms(reps, [&] { features = batch::feature_matrix(corpus.records, Exec::parallel); });
    report("feature_matrix", t_s, t_p, same_features(s, features));
  }
  {
    const Scene& scene = corpus.records.back();
    const Polyline& ref = scene.centerlines[0];
    const CartesianPoint gt = scene.future[10].point;
    batch::ErrorFieldGrid s, p;
    const double t_s = time_ms(
        reps, [&] { s = batch::compute_error_field(gt, ref, 0.02, 8.0, Exec::serial); });
    const double t_p = time_ms(
        reps, [&] { p = batch::compute_error_field(gt, ref, 0.02, 8.0, Exec::parallel); });
    bool same = s.cells.size() == p.cells.size();
    for (std::size_t i = 0; same && i < s.cells.size(); ++i) {
      same = s.cells[i].excluded == p.cells[i].excluded &&
             (s.cells[i].excluded || s.cells[i].difference == p.cells[i].difference);
    }
    report("error_field", t_s, t_p, same);
  }
  {
    const DomainSplit split = build_split(corpus.records, SplitOptions{10, 3, 9}, nullptr);
    BenchmarkResult s, p;
    const double t_s = time_ms(reps, [&] {
      s = run_benchmark(corpus.records, split, PredictorKind::nearest_neighbor, Frame::frenet,
                        kDefaultModes, Exec::serial);
    });
    const double t_p = time_ms(reps, [&] {
      p = run_benchmark(corpus.records, split, PredictorKind::nearest_neighbor, Frame::frenet,
                        kDefaultModes, Exec::parallel);
    });
    report("nn_frenet_benchmark", t_s, t_p, same_benchmark(s, p));
  }
  return 0;
}
