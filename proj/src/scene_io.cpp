#include "frenetkit/scene_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "frenetkit/errors.hpp"

namespace frenetkit {
namespace {

using nlohmann::json;

json timed_to_json(const std::vector<TimedPoint>& seq) {
  json arr = json::array();
  for (const TimedPoint& tp : seq) arr.push_back({tp.t, tp.point.x, tp.point.y});
  return arr;
}

std::vector<TimedPoint> timed_from_json(const json& arr, const std::string& field) {
  if (!arr.is_array()) throw ValidationError("field \"" + field + "\" must be an array");
  std::vector<TimedPoint> out;
  out.reserve(arr.size());
  for (const json& entry : arr) {
    if (!entry.is_array() || entry.size() != 3) {
      throw ValidationError("field \"" + field + "\" entries must be [t, x, y]");
    }
    out.push_back({entry[0].get<double>(), {entry[1].get<double>(), entry[2].get<double>()}});
  }
  return out;
}

std::vector<Polyline> centerlines_from_json(const json& arr) {
  if (!arr.is_array()) throw ValidationError("field \"centerlines\" must be an array");
  std::vector<Polyline> out;
  out.reserve(arr.size());
  for (const json& line : arr) {
    if (!line.is_array()) throw ValidationError("each centerline must be an array of [x, y]");
    std::vector<CartesianPoint> vertices;
    vertices.reserve(line.size());
    for (const json& v : line) {
      if (!v.is_array() || v.size() != 2) {
        throw ValidationError("centerline vertices must be [x, y]");
      }
      vertices.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    out.emplace_back(std::move(vertices));
  }
  return out;
}

}  // namespace

std::string scene_to_json_line(const Scene& scene) {
  json j;
  j["scene_id"] = scene.scene_id;
  j["observed"] = timed_to_json(scene.observed);
  if (!scene.future.empty()) j["future"] = timed_to_json(scene.future);
  json lines = json::array();
  for (const Polyline& line : scene.centerlines) {
    json verts = json::array();
    for (const CartesianPoint& v : line.vertices()) verts.push_back({v.x, v.y});
    lines.push_back(std::move(verts));
  }
  j["centerlines"] = std::move(lines);
  if (scene.domain.has_value()) j["domain"] = *scene.domain;
  return j.dump();
}

Scene scene_from_json_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed record: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("record must be a JSON object");
  if (!j.contains("scene_id")) throw ValidationError("missing field \"scene_id\"");

  Scene scene;
  scene.scene_id = j["scene_id"].get<std::string>();
  try {
    if (!j.contains("observed")) throw ValidationError("missing field \"observed\"");
    if (!j.contains("centerlines")) throw ValidationError("missing field \"centerlines\"");
    scene.observed = timed_from_json(j["observed"], "observed");
    if (j.contains("future") && !j["future"].is_null()) {
      scene.future = timed_from_json(j["future"], "future");
    }
    scene.centerlines = centerlines_from_json(j["centerlines"]);
    if (j.contains("domain") && !j["domain"].is_null()) scene.domain = j["domain"].get<int>();
    validate_scene(scene);
  } catch (const json::exception& e) {
    throw ValidationError("scene \"" + scene.scene_id + "\": " + e.what());
  } catch (const ValidationError& e) {
    std::string what = e.what();
    if (what.find(scene.scene_id) == std::string::npos) {
      throw ValidationError("scene \"" + scene.scene_id + "\": " + what);
    }
    throw;
  }
  return scene;
}

SceneFile parse_scenes(std::istream& in, const std::string& source_name) {
  SceneFile file;
  std::string line;
  std::size_t line_number = 0;
  bool header_seen = false;
  std::set<std::string> ids;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const std::string where = source_name + ":" + std::to_string(line_number) + ": ";
    if (!header_seen) {
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error& e) {
        throw ValidationError(where + "malformed header: " + e.what());
      }
      if (!j.is_object() || !j.contains("format")) {
        throw ValidationError(where + "first line must be the format header "
                              "{\"format\": \"" + std::string(kSceneFormatVersion) + "\"}");
      }
      file.version = j["format"].get<std::string>();
      if (file.version != kSceneFormatVersion) {
        throw ValidationError(where + "unsupported format version \"" + file.version + "\"");
      }
      header_seen = true;
      continue;
    }
    Scene scene;
    try {
      scene = scene_from_json_line(line);
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
    if (!ids.insert(scene.scene_id).second) {
      throw ValidationError(where + "duplicate scene_id \"" + scene.scene_id + "\"");
    }
    file.records.push_back(std::move(scene));
  }
  return file;
}

SceneFile parse_scene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scene file: " + path);
  return parse_scenes(in, path);
}

void write_scenes(const SceneFile& file, std::ostream& out) {
  out << "{\"format\":\"" << file.version << "\"}\n";
  for (const Scene& scene : file.records) out << scene_to_json_line(scene) << '\n';
}

void write_scene_file(const SceneFile& file, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open output file: " + path);
  write_scenes(file, out);
}

void write_split_manifest(const DomainSplit& split, std::ostream& out) {
  out << "scene_id,cluster,partition\n";
  for (const auto& [scene_id, cluster] : split.assignments) {
    const Partition part = split.partition.at(scene_id);
    const char* name = part == Partition::train ? "train" : part == Partition::val ? "val" : "test";
    out << scene_id << ',' << cluster << ',' << name << '\n';
  }
}

DomainSplit parse_split_manifest(std::istream& in, const std::string& source_name) {
  DomainSplit split;
  std::string line;
  std::size_t line_number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "scene_id,cluster,partition") {
        throw ValidationError(source_name + ":1: expected header scene_id,cluster,partition");
      }
      header_seen = true;
      continue;
    }
    const std::string where = source_name + ":" + std::to_string(line_number) + ": ";
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw ValidationError(where + "malformed manifest row");
    }
    const std::string scene_id = line.substr(0, c1);
    int cluster = 0;
    try {
      cluster = std::stoi(line.substr(c1 + 1, c2 - c1 - 1));
    } catch (const std::exception&) {
      throw ValidationError(where + "bad cluster id");
    }
    const std::string part = line.substr(c2 + 1);
    if (split.assignments.count(scene_id) != 0) {
      throw ValidationError(where + "duplicate scene_id \"" + scene_id + "\"");
    }
    split.assignments[scene_id] = cluster;
    if (part == "train") {
      split.partition[scene_id] = Partition::train;
      split.seen_domains.insert(cluster);
    } else if (part == "val") {
      split.partition[scene_id] = Partition::val;
      split.seen_domains.insert(cluster);
    } else if (part == "test") {
      split.partition[scene_id] = Partition::test;
      split.unseen_domains.insert(cluster);
    } else {
      throw ValidationError(where + "unknown partition \"" + part + "\"");
    }
  }
  for (const int domain : split.unseen_domains) {
    if (split.seen_domains.count(domain) != 0) {
      throw ValidationError(source_name + ": cluster " + std::to_string(domain) +
                            " appears in both seen and unseen partitions");
    }
  }
  return split;
}

DomainSplit parse_split_manifest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open split manifest: " + path);
  return parse_split_manifest(in, path);
}

}  // namespace frenetkit
