#include "dada/feasible_set.hpp"

#include <algorithm>
#include <cmath>

namespace dada {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kSlack = 1e-12;

void require_separable_metric(const NormContext& ctx, const char* shape) {
  if (ctx.kind() == NormContext::Kind::kDense) {
    throw UnsupportedGeometry(std::string(shape) +
                              " constraints are only supported with an identity or diagonal B");
  }
}

}  // namespace

std::string set_kind(const FeasibleSet& Q) {
  return std::visit(Overloaded{
                        [](const WholeSpace&) { return std::string("whole_space"); },
                        [](const EuclideanBall&) { return std::string("ball"); },
                        [](const Box&) { return std::string("box"); },
                    },
                    Q);
}

void validate(const FeasibleSet& Q, const NormContext& ctx) {
  std::visit(Overloaded{
                 [](const WholeSpace&) {},
                 [&](const EuclideanBall& ball) {
                   require_separable_metric(ctx, "ball");
                   ctx.check_dimension(ball.center, "ball center");
                   if (!(ball.radius > 0.0) || !std::isfinite(ball.radius)) {
                     throw std::invalid_argument("ball radius must be positive and finite");
                   }
                 },
                 [&](const Box& box) {
                   require_separable_metric(ctx, "box");
                   ctx.check_dimension(box.lower, "box lower");
                   ctx.check_dimension(box.upper, "box upper");
                   if ((box.lower.array() > box.upper.array()).any()) {
                     throw std::invalid_argument("box requires lower <= upper componentwise");
                   }
                 },
             },
             Q);
}

bool contains(const FeasibleSet& Q, const NormContext& ctx, const Vector& x) {
  ctx.check_dimension(x, "contains");
  return std::visit(Overloaded{
                        [](const WholeSpace&) { return true; },
                        [&](const EuclideanBall& ball) {
                          return ctx.primal_norm(x - ball.center) <=
                                 ball.radius + kSlack * std::max(1.0, ball.radius);
                        },
                        [&](const Box& box) {
                          return ((x.array() >= box.lower.array() - kSlack) &&
                                  (x.array() <= box.upper.array() + kSlack))
                              .all();
                        },
                    },
                    Q);
}

Vector project(const FeasibleSet& Q, const NormContext& ctx, const Vector& u) {
  ctx.check_dimension(u, "project");
  return std::visit(Overloaded{
                        [&](const WholeSpace&) -> Vector { return u; },
                        [&](const EuclideanBall& ball) -> Vector {
                          require_separable_metric(ctx, "ball");
                          const Vector offset = u - ball.center;
                          const double dist = ctx.primal_norm(offset);
                          if (dist <= ball.radius) return u;
                          return ball.center + offset * (ball.radius / dist);
                        },
                        [&](const Box& box) -> Vector {
                          require_separable_metric(ctx, "box");
                          return u.cwiseMax(box.lower).cwiseMin(box.upper);
                        },
                    },
                    Q);
}

Vector da_argmin(const FeasibleSet& Q, const NormContext& ctx, const Vector& s, double beta,
                 const Vector& x0) {
  if (!(beta > 0.0)) throw std::invalid_argument("da_argmin: beta must be positive");
  ctx.check_dimension(s, "da_argmin");
  if (!contains(Q, ctx, x0)) throw std::invalid_argument("da_argmin: x0 is not in the feasible set");
  return project(Q, ctx, x0 - ctx.apply_B_inverse(s) / beta);
}

}  // namespace dada
