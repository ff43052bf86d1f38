#include "dada/rng.hpp"

namespace dada {

double Rng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Rng::standard_normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

Vector Rng::uniform_vector(Eigen::Index n, double lo, double hi) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
  return v;
}

Vector Rng::on_sphere(Eigen::Index n, double radius) {
  Vector v(n);
  double norm = 0.0;
  // A zero draw has probability zero, but redraw rather than divide by it.
  while (norm == 0.0) {
    for (Eigen::Index i = 0; i < n; ++i) v[i] = standard_normal();
    norm = v.norm();
  }
  return v * (radius / norm);
}

}  // namespace dada
