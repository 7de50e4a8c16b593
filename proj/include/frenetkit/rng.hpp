#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace frenetkit {

// mt19937_64 with hand-rolled value mappings. The standard distributions
// are implementation-defined, which would break byte-identical outputs
// for a fixed seed across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : bits() % n; }

  /// Box-Muller; consumes two draws per pair of normals.
  double normal(double mean, double stddev) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + stddev * spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return mean + stddev * r * std::cos(theta);
  }

  /// Independent stream for a sub-task; stable under reordering of other
  /// draws on the parent.
  Rng fork(std::uint64_t stream) {
    return Rng(bits() ^ (stream * 0x9E3779B97F4A7C15ull));
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace frenetkit
