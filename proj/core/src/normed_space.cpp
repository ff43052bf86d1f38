#include "dada/normed_space.hpp"

#include <cmath>
#include <sstream>

namespace dada {

bool all_finite(const Vector& x) { return x.allFinite(); }

NormContext NormContext::identity(Eigen::Index dimension) {
  if (dimension <= 0) throw std::invalid_argument("NormContext: dimension must be positive");
  return NormContext(dimension, Kind::kIdentity);
}

NormContext NormContext::diagonal(Vector diag) {
  if (diag.size() == 0) throw std::invalid_argument("NormContext: empty diagonal");
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!std::isfinite(diag[i]) || diag[i] <= 0.0) {
      std::ostringstream msg;
      msg << "NormContext: diagonal entry " << i << " = " << diag[i] << " is not strictly positive";
      throw std::invalid_argument(msg.str());
    }
  }
  NormContext ctx(diag.size(), Kind::kDiagonal);
  ctx.diag_ = std::move(diag);
  return ctx;
}

NormContext NormContext::dense(Matrix B) {
  if (B.rows() == 0 || B.rows() != B.cols()) {
    throw std::invalid_argument("NormContext: dense B must be square and non-empty");
  }
  if (!B.allFinite()) throw std::invalid_argument("NormContext: dense B has non-finite entries");
  const double scale = B.cwiseAbs().maxCoeff();
  const double asym = (B - B.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw std::invalid_argument("NormContext: dense B is not symmetric");
  }
  NormContext ctx(B.rows(), Kind::kDense);
  ctx.cholesky_.compute(B);
  if (ctx.cholesky_.info() != Eigen::Success) {
    throw std::invalid_argument("NormContext: dense B is not positive definite (Cholesky failed)");
  }
  ctx.dense_ = std::move(B);
  return ctx;
}

void NormContext::check_dimension(const Vector& v, const char* what) const {
  if (v.size() != dimension_) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (got " << v.size() << ", expected " << dimension_ << ")";
    throw DimensionError(msg.str());
  }
}

double NormContext::primal_norm(const Vector& x) const {
  check_dimension(x, "primal_norm");
  switch (kind_) {
    case Kind::kIdentity:
      return x.norm();
    case Kind::kDiagonal:
      return std::sqrt((diag_.array() * x.array().square()).sum());
    case Kind::kDense:
      // ||L^T x|| avoids a negative round-off under the square root.
      return (cholesky_.matrixU() * x).norm();
  }
  return 0.0;
}

double NormContext::dual_norm(const Vector& s) const {
  check_dimension(s, "dual_norm");
  switch (kind_) {
    case Kind::kIdentity:
      return s.norm();
    case Kind::kDiagonal:
      return std::sqrt((s.array().square() / diag_.array()).sum());
    case Kind::kDense:
      return cholesky_.matrixL().solve(s).norm();
  }
  return 0.0;
}

Vector NormContext::apply_B(const Vector& x) const {
  check_dimension(x, "apply_B");
  switch (kind_) {
    case Kind::kIdentity:
      return x;
    case Kind::kDiagonal:
      return diag_.cwiseProduct(x);
    case Kind::kDense:
      return dense_ * x;
  }
  return x;
}

Vector NormContext::apply_B_inverse(const Vector& s) const {
  check_dimension(s, "apply_B_inverse");
  switch (kind_) {
    case Kind::kIdentity:
      return s;
    case Kind::kDiagonal:
      return s.cwiseQuotient(diag_);
    case Kind::kDense:
      return cholesky_.solve(s);
  }
  return s;
}

const char* to_string(NormContext::Kind kind) {
  switch (kind) {
    case NormContext::Kind::kIdentity:
      return "identity";
    case NormContext::Kind::kDiagonal:
      return "diagonal";
    case NormContext::Kind::kDense:
      return "dense";
  }
  return "unknown";
}

}  // namespace dada
