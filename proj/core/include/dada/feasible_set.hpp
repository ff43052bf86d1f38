#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include "dada/normed_space.hpp"

namespace dada {

/// Raised for (set shape, norm representation) pairs without an exact step.
class UnsupportedGeometry : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct WholeSpace {};

/// {x : ||x - center|| <= radius} measured in the norm of the context.
struct EuclideanBall {
  Vector center;
  double radius = 1.0;
};

struct Box {
  Vector lower;
  Vector upper;
};

using FeasibleSet = std::variant<WholeSpace, EuclideanBall, Box>;

std::string set_kind(const FeasibleSet& Q);

/// Throws std::invalid_argument for malformed descriptors (radius <= 0,
/// lower > upper, dimension mismatch) and UnsupportedGeometry when a ball or
/// box is paired with a dense B.
void validate(const FeasibleSet& Q, const NormContext& ctx);

/// Membership with 1e-12 slack (scaled by max{1, radius} for balls).
bool contains(const FeasibleSet& Q, const NormContext& ctx, const Vector& x);

/// Projection of u onto Q in the B-metric.
Vector project(const FeasibleSet& Q, const NormContext& ctx, const Vector& u);

/// argmin_{x in Q} <s, x> + (beta/2) ||x - x0||^2.
///
/// The objective equals (beta/2) ||x - u||^2 + const with u = x0 - B^{-1}s / beta,
/// so the minimizer is the B-metric projection of u. For a ball that is a
/// radial rescaling of u - center. For a box with diagonal B the objective is
/// separable across coordinates and each one-dimensional quadratic is
/// minimized on its interval by clamping, so the clamp is exact.
///
/// Throws std::invalid_argument if beta <= 0 or x0 is not in Q.
Vector da_argmin(const FeasibleSet& Q, const NormContext& ctx, const Vector& s, double beta,
                 const Vector& x0);

}  // namespace dada
