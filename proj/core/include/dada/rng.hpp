#pragma once

#include <cstdint>
#include <random>

#include "dada/normed_space.hpp"

namespace dada {

/// Seedable 64-bit generator (std::mt19937_64) with the handful of draws the
/// instance generators need. Streams are reproducible within one build; the
/// real-valued distributions come from the standard library and are not
/// promised to match across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi);
  double standard_normal();
  /// Vector of `n` independent uniform(lo, hi) draws, drawn in index order.
  Vector uniform_vector(Eigen::Index n, double lo, double hi);
  /// Uniform point on the Euclidean sphere of the given radius: `n` standard
  /// normals drawn in index order, normalized, then scaled.
  Vector on_sphere(Eigen::Index n, double radius);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dada
