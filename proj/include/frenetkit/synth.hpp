#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "frenetkit/rng.hpp"
#include "frenetkit/scene_io.hpp"

namespace frenetkit {

/// Geometry families for the synthetic corpus.
enum class Family { straight, arc, s_curve, right_turn, roundabout_arc };

Family family_from_name(const std::string& name);
std::string family_name(Family family);

struct FamilySpec {
  Family family = Family::straight;
  std::size_t count = 0;     // 0 -> corpus-level n_per_family
  double radius_min = 0.0;   // 0 -> family default
  double radius_max = 0.0;
};

/// Parses "name", "name=count", "name:rmin-rmax" or "name=count:rmin-rmax".
FamilySpec family_spec_from_string(const std::string& text);

/// One agent following a freshly drawn road of the given family at the
/// given initial speed and along-track acceleration, with lateral noise
/// (sigma 0.1 m) and 1-4 candidate centerlines including distractors.
Scene synthesize_scene(const FamilySpec& spec, double speed, double accel,
                       std::string scene_id, Rng& rng);

/// Deterministic corpus: same seed and family list give byte-identical
/// output. Agent speeds stay within 5-15 m/s.
SceneFile synthesize_corpus(std::uint64_t seed, std::span<const FamilySpec> families,
                            std::size_t n_per_family);

}  // namespace frenetkit
