#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "frenetkit/domains.hpp"
#include "frenetkit/scene.hpp"

namespace frenetkit {

inline constexpr const char* kSceneFormatVersion = "frenetkit/1";

/// Line-delimited scene records behind a one-line format header. An empty
/// file parses as an empty SceneFile.
struct SceneFile {
  std::string version = kSceneFormatVersion;
  std::vector<Scene> records;
};

/// Parses and validates; rejects on the first malformed record with its
/// line number, and names the offending scene in every validation error.
SceneFile parse_scene_file(const std::string& path);
SceneFile parse_scenes(std::istream& in, const std::string& source_name);

void write_scene_file(const SceneFile& file, const std::string& path);
void write_scenes(const SceneFile& file, std::ostream& out);

/// Single-record JSON codec (one line of the scene file).
std::string scene_to_json_line(const Scene& scene);
Scene scene_from_json_line(const std::string& line);

/// Split manifest: comma-separated scene_id,cluster,partition with a
/// header row. Parsing rebuilds assignments, partition, and the
/// seen/unseen domain sets (cluster centers are not carried).
void write_split_manifest(const DomainSplit& split, std::ostream& out);
DomainSplit parse_split_manifest(std::istream& in, const std::string& source_name);
DomainSplit parse_split_manifest_file(const std::string& path);

}  // namespace frenetkit
