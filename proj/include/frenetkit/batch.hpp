#pragma once

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

#include "frenetkit/domains.hpp"
#include "frenetkit/scene.hpp"

namespace frenetkit {

/// Corpus-level kernels run either serially (the reference used for
/// testing) or as OpenMP loops. Both paths call the same per-item worker
/// and write to preassigned slots, so outputs are bit-identical.
enum class Exec { serial, parallel };

namespace batch {

template <typename Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
  if (exec == Exec::parallel) {
    // Exceptions may not escape the parallel region; capture the one
    // thrown at the lowest index so failures report deterministically.
    std::exception_ptr error;
    std::size_t error_index = n;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(frenetkit_for_each_index)
        if (static_cast<std::size_t>(i) < error_index) {
          error_index = static_cast<std::size_t>(i);
          error = std::current_exception();
        }
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (std::size_t i = 0; i < n; ++i) fn(i);
  }
}

/// Per-scene Frenet view: selected reference, rebase arc, transformed
/// observed and (when present) future points.
struct SceneFrenetTable {
  std::string scene_id;
  std::size_t reference_index = 0;
  double s1_raw = 0.0;
  std::vector<FrenetPoint> observed;
  std::vector<FrenetPoint> future;
};

std::vector<SceneFrenetTable> transform_corpus(std::span<const Scene> scenes, Exec exec);

struct RoundTripStats {
  double mean_error = 0.0;
  double max_error = 0.0;
  std::size_t n_points = 0;
  std::size_t n_scenes = 0;
};

/// Forward + inverse transform over every trajectory point of every
/// scene; errors aggregated in scene order.
RoundTripStats roundtrip_corpus(std::span<const Scene> scenes, Exec exec);

std::vector<FeatureVector> feature_matrix(std::span<const Scene> scenes, Exec exec);

struct ErrorFieldCell {
  double cartesian_error = 0.0;
  double frenet_error = 0.0;
  double difference = 0.0;
  bool excluded = false;  // outside the mapped region
};

/// Square grid of prediction-error magnitudes around a ground-truth
/// point, measured in both frames.
struct ErrorFieldGrid {
  CartesianPoint center;
  double resolution = 0.0;
  double half_extent = 0.0;
  std::size_t side = 0;                // cells per side (odd; center cell exact)
  std::vector<ErrorFieldCell> cells;   // row-major, side*side
  std::size_t excluded_count = 0;

  const ErrorFieldCell& at(std::size_t row, std::size_t col) const {
    return cells[row * side + col];
  }
};

ErrorFieldGrid compute_error_field(CartesianPoint gt_point, const Polyline& reference,
                                   double resolution, double half_extent, Exec exec);

}  // namespace batch
}  // namespace frenetkit
