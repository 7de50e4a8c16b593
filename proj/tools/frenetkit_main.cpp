// frenetkit command-line surface. Exit codes: 0 ok, 1 usage, 2 data error.

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "frenetkit/baselines.hpp"
#include "frenetkit/batch.hpp"
#include "frenetkit/domains.hpp"
#include "frenetkit/errors.hpp"
#include "frenetkit/format.hpp"
#include "frenetkit/reference.hpp"
#include "frenetkit/scene_io.hpp"
#include "frenetkit/synth.hpp"

namespace {

using namespace frenetkit;

// Writes to the given path, or stdout when the path is empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ValidationError("cannot open output file: " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

Exec exec_from_name(const std::string& name) {
  return name == "serial" ? Exec::serial : Exec::parallel;
}

std::vector<FamilySpec> parse_family_list(const std::string& text) {
  std::vector<FamilySpec> specs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) specs.push_back(family_spec_from_string(item));
  }
  if (specs.empty()) throw ValidationError("empty family list");
  return specs;
}

std::string opt(const std::optional<double>& value) {
  return value.has_value() ? format_double(*value) : "na";
}

void cmd_synth(const std::string& out_path, std::uint64_t seed, const std::string& families,
               std::size_t n_per_family) {
  const std::vector<FamilySpec> specs = parse_family_list(families);
  const SceneFile corpus = synthesize_corpus(seed, specs, n_per_family);
  Output out(out_path);
  write_scenes(corpus, out.os());
  std::cerr << "synthesized " << corpus.records.size() << " scenes\n";
}

void cmd_transform(const std::string& scenes_path, const std::string& out_path, bool inverse,
                   const std::string& exec) {
  const SceneFile file = parse_scene_file(scenes_path);
  const auto tables = batch::transform_corpus(file.records, exec_from_name(exec));
  Output out(out_path);
  if (!inverse) {
    out.os() << "scene_id,kind,index,t,s,d,ref_index,s1_raw\n";
    for (std::size_t i = 0; i < tables.size(); ++i) {
      const Scene& scene = file.records[i];
      const batch::SceneFrenetTable& table = tables[i];
      const auto emit = [&](const char* kind, const std::vector<TimedPoint>& timed,
                            const std::vector<FrenetPoint>& pts) {
        for (std::size_t j = 0; j < pts.size(); ++j) {
          out.os() << table.scene_id << ',' << kind << ',' << j << ','
                   << format_double(timed[j].t) << ',' << format_double(pts[j].s) << ','
                   << format_double(pts[j].d) << ',' << table.reference_index << ','
                   << format_double(table.s1_raw) << '\n';
        }
      };
      emit("obs", scene.observed, table.observed);
      emit("fut", scene.future, table.future);
    }
    return;
  }
  out.os() << "scene_id,kind,index,t,x,y\n";
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const Scene& scene = file.records[i];
    const batch::SceneFrenetTable& table = tables[i];
    const Polyline& ref = scene.centerlines[table.reference_index];
    const auto emit = [&](const char* kind, const std::vector<TimedPoint>& timed,
                          const std::vector<FrenetPoint>& pts) {
      const auto back = frenet_to_cartesian(pts, ref, table.s1_raw);
      for (std::size_t j = 0; j < back.size(); ++j) {
        out.os() << table.scene_id << ',' << kind << ',' << j << ','
                 << format_double(timed[j].t) << ',' << format_double(back[j].x) << ','
                 << format_double(back[j].y) << '\n';
      }
    };
    emit("obs", scene.observed, table.observed);
    emit("fut", scene.future, table.future);
  }
}

void cmd_select_ref(const std::string& scenes_path, const std::string& out_path) {
  const SceneFile file = parse_scene_file(scenes_path);
  Output out(out_path);
  out.os() << "scene_id,candidate_index,distance_similarity,shape_similarity,total,selected\n";
  for (const Scene& scene : file.records) {
    const ReferenceSelection sel =
        select_reference(points_of(scene.observed), scene.centerlines);
    for (const CandidateScore& score : sel.scores) {
      out.os() << scene.scene_id << ',' << score.candidate_index << ','
               << format_double(score.distance_similarity) << ','
               << format_double(score.shape_similarity) << ',' << format_double(score.total)
               << ',' << (score.candidate_index == sel.index ? 1 : 0) << '\n';
    }
  }
}

void cmd_split(const std::string& scenes_path, const std::string& manifest_path,
               const std::string& scatter_path, std::size_t k, std::size_t n_unseen,
               std::uint64_t seed, const std::string& exec) {
  const SceneFile file = parse_scene_file(scenes_path);
  std::vector<FeatureVector> features =
      batch::feature_matrix(file.records, exec_from_name(exec));
  const DomainSplit split =
      build_split(std::span<FeatureVector>(features), SplitOptions{k, n_unseen, seed});
  {
    Output manifest(manifest_path);
    write_split_manifest(split, manifest.os());
  }
  Output scatter(scatter_path);
  scatter.os() << "scene_id,cluster,e1,e2\n";
  for (const ScatterRow& row : emit_domain_scatter(split, features)) {
    scatter.os() << row.scene_id << ',' << row.cluster << ',' << format_double(row.e1) << ','
                 << format_double(row.e2) << '\n';
  }
}

void cmd_eval(const std::string& scenes_path, const std::string& split_path,
              const std::string& predictor, const std::string& frame, std::size_t modes,
              const std::string& out_path, const std::string& exec) {
  const SceneFile file = parse_scene_file(scenes_path);
  const DomainSplit split = parse_split_manifest_file(split_path);
  const BenchmarkResult result =
      run_benchmark(file.records, split, predictor_from_name(predictor),
                    frame_from_name(frame), modes, exec_from_name(exec));
  Output out(out_path);
  out.os() << "model,frame,group,n_scenes,min_ade,min_fde,miss_rate,"
              "min_ade_degradation_pct,min_fde_degradation_pct,miss_rate_degradation_pct\n";
  for (const MetricsReport& report : result.reports) {
    out.os() << predictor << ',' << frame << ',' << report.group << ',' << report.n_scenes
             << ',' << format_double(report.min_ade) << ',' << format_double(report.min_fde)
             << ',' << format_double(report.miss_rate);
    if (report.group == "unseen-test") {
      out.os() << ',' << opt(result.unseen_vs_seen.min_ade_pct) << ','
               << opt(result.unseen_vs_seen.min_fde_pct) << ','
               << opt(result.unseen_vs_seen.miss_rate_pct) << '\n';
    } else {
      out.os() << ",na,na,na\n";
    }
  }
  if (result.out_of_map_points > 0) {
    std::cerr << "predictions left the mapped region: " << result.out_of_map_points
              << " points inverse-clamped\n";
  }
}

void cmd_roundtrip(const std::string& scenes_path, const std::string& exec) {
  const SceneFile file = parse_scene_file(scenes_path);
  const batch::RoundTripStats stats =
      batch::roundtrip_corpus(file.records, exec_from_name(exec));
  std::cout << "scenes=" << stats.n_scenes << " points=" << stats.n_points
            << " mean=" << format_double(stats.mean_error)
            << " max=" << format_double(stats.max_error) << '\n';
}

void cmd_error_field(const std::string& scenes_path, const std::string& scene_id,
                     int point_index, double resolution, double half_extent,
                     const std::string& out_path, const std::string& exec) {
  const SceneFile file = parse_scene_file(scenes_path);
  if (file.records.empty()) throw ValidationError("scene file has no records");
  const Scene* scene = &file.records.front();
  if (!scene_id.empty()) {
    scene = nullptr;
    for (const Scene& s : file.records) {
      if (s.scene_id == scene_id) scene = &s;
    }
    if (scene == nullptr) throw ValidationError("scene \"" + scene_id + "\" not found");
  }
  const ReferenceSelection sel =
      select_reference(points_of(scene->observed), scene->centerlines);
  const Polyline& ref = scene->centerlines[sel.index];
  const std::vector<TimedPoint>& source = scene->future.empty() ? scene->observed : scene->future;
  const std::size_t idx = point_index < 0
                              ? source.size() - 1
                              : static_cast<std::size_t>(point_index);
  if (idx >= source.size()) {
    throw ValidationError("point index " + std::to_string(idx) + " out of range");
  }
  const batch::ErrorFieldGrid grid = batch::compute_error_field(
      source[idx].point, ref, resolution, half_extent, exec_from_name(exec));
  Output out(out_path);
  out.os() << "row,col,x,y,cartesian_error,frenet_error,difference\n";
  const double half = static_cast<double>(grid.side / 2);
  for (std::size_t row = 0; row < grid.side; ++row) {
    for (std::size_t col = 0; col < grid.side; ++col) {
      const batch::ErrorFieldCell& cell = grid.at(row, col);
      out.os() << row << ',' << col << ','
               << format_double(grid.center.x + (static_cast<double>(col) - half) * resolution)
               << ','
               << format_double(grid.center.y + (static_cast<double>(row) - half) * resolution)
               << ',' << format_double(cell.cartesian_error) << ','
               << format_double(cell.frenet_error) << ',' << format_double(cell.difference)
               << '\n';
    }
  }
  std::cerr << "scene=" << scene->scene_id << " excluded=" << grid.excluded_count << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lane-relative trajectory toolkit: Frenet transforms, reference-path selection,\n"
               "domain splits, and frame-aware baseline benchmarks"};
  app.require_subcommand(1);
  std::function<void()> action;

  std::string scenes, out, exec = "parallel";
  const auto add_exec = [&exec](CLI::App* cmd) {
    cmd->add_option("--exec", exec, "Execution mode")
        ->check(CLI::IsMember({"serial", "parallel"}));
  };

  {
    auto* cmd = app.add_subcommand("synth", "Generate a deterministic synthetic scene corpus");
    static std::uint64_t seed = 0;
    static std::string families = "straight,arc,s-curve,right-turn,roundabout-arc";
    static std::size_t n_per_family = 200;
    cmd->add_option("--seed", seed, "Corpus seed");
    cmd->add_option("--families", families,
                    "Comma-separated family specs, e.g. straight=400,arc=200:30-42");
    cmd->add_option("--n-per-family", n_per_family, "Default scene count per family");
    cmd->add_option("--out", out, "Output scene file (default stdout)");
    cmd->callback([&] { action = [&] { cmd_synth(out, seed, families, n_per_family); }; });
  }
  {
    auto* cmd = app.add_subcommand("transform",
                                   "Scene file to Frenet coordinate table (or back with --inverse)");
    static bool inverse = false;
    cmd->add_option("--scenes", scenes, "Input scene file")->required();
    cmd->add_flag("--inverse", inverse, "Emit the reconstructed Cartesian points instead");
    cmd->add_option("--out", out, "Output CSV (default stdout)");
    add_exec(cmd);
    cmd->callback([&] { action = [&] { cmd_transform(scenes, out, inverse, exec); }; });
  }
  {
    auto* cmd = app.add_subcommand("select-ref", "Per-scene reference selection with scores");
    cmd->add_option("--scenes", scenes, "Input scene file")->required();
    cmd->add_option("--out", out, "Output CSV (default stdout)");
    cmd->callback([&] { action = [&] { cmd_select_ref(scenes, out); }; });
  }
  {
    auto* cmd = app.add_subcommand("split", "Cluster scenes into domains and emit the split");
    static std::size_t k = 10, n_unseen = 3;
    static std::uint64_t seed = 0;
    static std::string manifest, scatter;
    cmd->add_option("--scenes", scenes, "Input scene file")->required();
    cmd->add_option("--k", k, "Number of clusters");
    cmd->add_option("--unseen", n_unseen, "Number of unseen domains");
    cmd->add_option("--seed", seed, "Clustering and shuffle seed");
    cmd->add_option("--out-manifest", manifest, "Split manifest CSV (default stdout)");
    cmd->add_option("--out-scatter", scatter, "Domain scatter CSV (default stdout)");
    add_exec(cmd);
    cmd->callback(
        [&] { action = [&] { cmd_split(scenes, manifest, scatter, k, n_unseen, seed, exec); }; });
  }
  {
    auto* cmd = app.add_subcommand("eval", "Benchmark a predictor/frame pair against a split");
    static std::string split_path, predictor = "cv", frame = "cartesian";
    static std::size_t modes = kDefaultModes;
    cmd->add_option("--scenes", scenes, "Input scene file")->required();
    cmd->add_option("--split", split_path, "Split manifest CSV")->required();
    cmd->add_option("--predictor", predictor, "Predictor")
        ->check(CLI::IsMember({"cv", "nn"}));
    cmd->add_option("--frame", frame, "Prediction frame")
        ->check(CLI::IsMember({"cartesian", "frenet"}));
    cmd->add_option("--modes", modes, "Prediction modes (K)");
    cmd->add_option("--out", out, "Output CSV (default stdout)");
    add_exec(cmd);
    cmd->callback([&] {
      action = [&] { cmd_eval(scenes, split_path, predictor, frame, modes, out, exec); };
    });
  }
  {
    auto* cmd = app.add_subcommand("roundtrip", "Mean/max Cartesian->Frenet->Cartesian error");
    cmd->add_option("--scenes", scenes, "Input scene file")->required();
    add_exec(cmd);
    cmd->callback([&] { action = [&] { cmd_roundtrip(scenes, exec); }; });
  }
  {
    auto* cmd = app.add_subcommand("error-field",
                                   "Error-magnitude grid around a ground-truth point, both frames");
    static std::string scene_id;
    static int point_index = -1;
    static double resolution = 0.25, half_extent = 5.0;
    cmd->add_option("--scenes", scenes, "Input scene file")->required();
    cmd->add_option("--scene-id", scene_id, "Scene to use (default: first)");
    cmd->add_option("--point-index", point_index,
                    "Ground-truth point index (default: last future point)");
    cmd->add_option("--resolution", resolution, "Grid resolution in meters");
    cmd->add_option("--half-extent", half_extent, "Grid half extent in meters");
    cmd->add_option("--out", out, "Output CSV (default stdout)");
    add_exec(cmd);
    cmd->callback([&] {
      action = [&] {
        cmd_error_field(scenes, scene_id, point_index, resolution, half_extent, out, exec);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    action();
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
