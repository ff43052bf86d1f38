#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace dada {

/// Coordinate vector used for points and subgradients alike.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// True when every entry is finite.
bool all_finite(const Vector& x);

/// Euclidean geometry induced by a fixed symmetric positive definite matrix B.
///
/// The primal norm is <Bx, x>^{1/2} and the dual norm is <s, B^{-1}s>^{1/2}.
/// Three representations are supported; the identity path performs no matrix
/// work at all. A dense B is factored once at construction (Cholesky) and the
/// factor is reused by every inverse application. Instances are immutable and
/// safe to share between threads.
class NormContext {
 public:
  enum class Kind { kIdentity, kDiagonal, kDense };

  static NormContext identity(Eigen::Index dimension);
  /// Throws std::invalid_argument unless every entry is finite and > 0.
  static NormContext diagonal(Vector diag);
  /// Throws std::invalid_argument if B is not square, not symmetric within
  /// 1e-12 relative, or not positive definite.
  static NormContext dense(Matrix B);

  Eigen::Index dimension() const { return dimension_; }
  Kind kind() const { return kind_; }
  const Vector& diagonal_entries() const { return diag_; }
  const Matrix& dense_matrix() const { return dense_; }

  double primal_norm(const Vector& x) const;
  double dual_norm(const Vector& s) const;

  Vector apply_B(const Vector& x) const;
  Vector apply_B_inverse(const Vector& s) const;

  /// Throws DimensionError when v.size() != dimension().
  void check_dimension(const Vector& v, const char* what) const;

 private:
  NormContext(Eigen::Index dimension, Kind kind) : dimension_(dimension), kind_(kind) {}

  Eigen::Index dimension_;
  Kind kind_;
  Vector diag_;
  Matrix dense_;
  Eigen::LLT<Matrix> cholesky_;
};

const char* to_string(NormContext::Kind kind);

}  // namespace dada
