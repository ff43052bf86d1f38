#include "dada/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dada/rng.hpp"

namespace dada {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kE = std::numbers::e;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double factorial(int n) { return std::tgamma(static_cast<double>(n) + 1.0); }

void require_nonnegative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "ClassSpec: " << name << " must be finite and nonnegative (got " << value << ")";
    throw std::invalid_argument(msg.str());
  }
}

// Term of a delta(eps) min; a zero constant removes the term.
double ratio_term(double numerator, double constant) {
  return constant > 0.0 ? numerator / constant : kInf;
}

double derivative_norm(const HighOrderClass& c, int i) {
  auto it = c.derivative_norms.find(i);
  return it == c.derivative_norms.end() ? 0.0 : it->second;
}

}  // namespace

void validate(const ClassSpec& spec) {
  std::visit(Overloaded{
                 [](const LipschitzClass& c) { require_nonnegative(c.L0, "L0"); },
                 [](const LipschitzSmoothClass& c) {
                   require_nonnegative(c.L1, "L1");
                   require_nonnegative(c.g_star, "g_star");
                 },
                 [](const HolderSmoothClass& c) {
                   require_nonnegative(c.H, "H");
                   require_nonnegative(c.g_star, "g_star");
                   if (!(c.nu >= 0.0 && c.nu <= 1.0)) {
                     throw std::invalid_argument("ClassSpec: nu must lie in [0, 1]");
                   }
                 },
                 [](const HighOrderClass& c) {
                   if (c.p < 2) throw std::invalid_argument("ClassSpec: p must be >= 2");
                   require_nonnegative(c.Lp, "Lp");
                   require_nonnegative(c.g_star, "g_star");
                   for (const auto& [i, norm] : c.derivative_norms) {
                     if (i < 2 || i > c.p) {
                       throw std::invalid_argument("ClassSpec: derivative order outside [2, p]");
                     }
                     require_nonnegative(norm, "derivative norm");
                   }
                 },
                 [](const QscClass& c) {
                   require_nonnegative(c.M, "M");
                   require_nonnegative(c.hess_norm, "hess_norm");
                   require_nonnegative(c.g_star, "g_star");
                 },
                 [](const L0L1SmoothClass& c) {
                   require_nonnegative(c.L0, "L0");
                   require_nonnegative(c.L1, "L1");
                   require_nonnegative(c.g_star, "g_star");
                 },
             },
             spec);
}

std::string class_name(const ClassSpec& spec) {
  return std::visit(Overloaded{
                        [](const LipschitzClass&) { return std::string("lipschitz"); },
                        [](const LipschitzSmoothClass&) { return std::string("lipschitz-smooth"); },
                        [](const HolderSmoothClass&) { return std::string("holder-smooth"); },
                        [](const HighOrderClass&) { return std::string("high-order"); },
                        [](const QscClass&) { return std::string("qsc"); },
                        [](const L0L1SmoothClass&) { return std::string("l0l1-smooth"); },
                    },
                    spec);
}

RateConstants RateConstants::from(double D0, double rbar, double c) {
  if (!(D0 >= 0.0)) throw std::invalid_argument("RateConstants: D0 must be nonnegative");
  if (!(rbar > 0.0)) throw std::invalid_argument("RateConstants: rbar must be positive");
  if (!(c > std::numbers::sqrt2)) throw std::invalid_argument("RateConstants: c must exceed sqrt(2)");
  RateConstants rc;
  rc.D0 = D0;
  rc.rbar = rbar;
  rc.c = c;
  rc.Dbar = std::max(rbar, 2.0 * c / (c - std::numbers::sqrt2) * D0);
  rc.D = std::numbers::sqrt2 * (c * D0 + rc.Dbar / c);
  return rc;
}

double RateConstants::log_factor() const { return std::log(kE * Dbar / rbar); }

double delta_eps(const ClassSpec& spec, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("delta_eps: eps must be positive");
  return std::visit(
      Overloaded{
          [&](const LipschitzClass& c) { return ratio_term(eps, c.L0); },
          [&](const LipschitzSmoothClass& c) {
            const double smooth = c.L1 > 0.0 ? std::sqrt(eps / c.L1) : kInf;
            return std::min(smooth, ratio_term(eps, 2.0 * c.g_star));
          },
          [&](const HolderSmoothClass& c) {
            const double holder =
                c.H > 0.0 ? std::pow((1.0 + c.nu) * eps / (2.0 * c.H), 1.0 / (1.0 + c.nu)) : kInf;
            return std::min(holder, ratio_term(eps, 2.0 * c.g_star));
          },
          [&](const HighOrderClass& c) {
            const double share = static_cast<double>(c.p + 1);
            double delta = ratio_term(eps, share * c.g_star);
            for (int i = 2; i <= c.p; ++i) {
              const double norm = derivative_norm(c, i);
              if (norm > 0.0) {
                delta = std::min(delta, std::pow(factorial(i) * eps / (share * norm), 1.0 / i));
              }
            }
            if (c.Lp > 0.0) {
              delta = std::min(delta, std::pow(factorial(c.p) * eps / c.Lp, 1.0 / (c.p + 1)));
            }
            return delta;
          },
          [&](const QscClass& c) {
            const double curv = c.hess_norm > 0.0
                                    ? std::sqrt(eps / (2.0 * (kE - 2.0) * c.hess_norm))
                                    : kInf;
            return std::min({ratio_term(1.0, c.M), curv, ratio_term(eps, 2.0 * c.g_star)});
          },
          [&](const L0L1SmoothClass& c) {
            const double scale = c.L0 + c.L1 * c.g_star;
            const double curv = scale > 0.0 ? std::sqrt(2.0 * eps / (3.0 * scale)) : kInf;
            return std::min({ratio_term(1.0, c.L1), curv, ratio_term(eps, 2.0 * c.g_star)});
          },
      },
      spec);
}

double complexity_T_v(double delta, const RateConstants& rc) {
  if (!(delta > 0.0)) throw std::invalid_argument("complexity_T_v: delta must be positive");
  if (std::isinf(delta)) return 0.0;
  const double lf = rc.log_factor();
  return kE * kE * rc.D * rc.D / (delta * delta) * lf * lf;
}

double complexity_T(const ClassSpec& spec, double eps, const RateConstants& rc) {
  if (!(eps > 0.0)) throw std::invalid_argument("complexity_T: eps must be positive");
  const double g_term_2 = [&] {
    // 4 g*^2 / eps^2, shared by most corollaries.
    return std::visit(Overloaded{
                          [](const LipschitzClass&) { return 0.0; },
                          [&](const auto& c) { return 4.0 * c.g_star * c.g_star / (eps * eps); },
                      },
                      spec);
  }();
  const double factor = std::visit(
      Overloaded{
          [&](const LipschitzClass& c) { return c.L0 * c.L0 / (eps * eps); },
          [&](const LipschitzSmoothClass& c) { return std::max(c.L1 / eps, g_term_2); },
          [&](const HolderSmoothClass& c) {
            return std::max(std::pow(2.0 * c.H / ((1.0 + c.nu) * eps), 2.0 / (1.0 + c.nu)),
                            g_term_2);
          },
          [&](const HighOrderClass& c) {
            const double share = static_cast<double>(c.p + 1);
            double f = share * share * c.g_star * c.g_star / (eps * eps);
            for (int i = 2; i <= c.p; ++i) {
              f = std::max(f, std::pow(share * derivative_norm(c, i) / (factorial(i) * eps), 2.0 / i));
            }
            return std::max(f, std::pow(c.Lp / (factorial(c.p) * eps), 2.0 / (c.p + 1)));
          },
          [&](const QscClass& c) {
            return std::max({c.M * c.M, 2.0 * (kE - 2.0) * c.hess_norm / eps, g_term_2});
          },
          [&](const L0L1SmoothClass& c) {
            return std::max(
                {c.L1 * c.L1, 3.0 * (c.L0 + c.L1 * c.g_star) / (2.0 * eps), g_term_2});
          },
      },
      spec);
  const double lf = rc.log_factor();
  return factor * kE * kE * rc.D * rc.D * lf * lf;
}

double phi(double t) {
  if (std::abs(t) < 1e-4) {
    // sum_{j>=0} t^j / (j + 2)!, six terms.
    return 1.0 / 2 + t * (1.0 / 6 + t * (1.0 / 24 + t * (1.0 / 120 + t * (1.0 / 720 + t / 5040))));
  }
  return (std::expm1(t) - t) / (t * t);
}

double xi(double t) {
  if (std::abs(t) < 1e-4) return t * t * phi(t);
  return std::expm1(t) - t;
}

double growth_upper_bound(const ClassSpec& spec, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("growth_upper_bound: t must be nonnegative");
  return std::visit(
      Overloaded{
          [&](const LipschitzClass& c) { return c.L0 * t; },
          [&](const LipschitzSmoothClass& c) { return 0.5 * c.L1 * t * t + c.g_star * t; },
          [&](const HolderSmoothClass& c) {
            return c.g_star * t + c.H / (1.0 + c.nu) * std::pow(t, 1.0 + c.nu);
          },
          [&](const HighOrderClass& c) {
            double sum = c.g_star * t;
            for (int i = 2; i <= c.p; ++i) sum += derivative_norm(c, i) * std::pow(t, i) / factorial(i);
            return sum + c.Lp * std::pow(t, c.p + 1) / factorial(c.p + 1);
          },
          [&](const QscClass& c) { return c.g_star * t + c.hess_norm * t * t * phi(c.M * t); },
          // (L0 + L1 g*) / L1^2 * xi(L1 t) written as (L0 + L1 g*) t^2 phi(L1 t)
          // so that L1 = 0 reduces to the quadratic limit.
          [&](const L0L1SmoothClass& c) {
            return c.g_star * t + (c.L0 + c.L1 * c.g_star) * t * t * phi(c.L1 * t);
          },
      },
      spec);
}

double log_plus(double t) { return 1.0 + std::log(t); }

double complexity_big_o(const ClassSpec& spec, double eps, double D0bar, double rbar) {
  const double lp = log_plus(D0bar / rbar);
  const double scale = D0bar * D0bar * lp * lp;
  return std::visit(
      Overloaded{
          [&](const LipschitzClass& c) { return c.L0 * c.L0 / (eps * eps) * scale; },
          [&](const LipschitzSmoothClass& c) { return c.L1 / eps * scale; },
          [&](const HolderSmoothClass& c) {
            return std::pow(c.H / eps, 2.0 / (1.0 + c.nu)) * scale;
          },
          [&](const HighOrderClass& c) {
            double worst = 0.0;
            for (int i = 2; i <= c.p; ++i) {
              worst = std::max(worst,
                               std::pow(c.p / factorial(i) * derivative_norm(c, i) / eps, 2.0 / i));
            }
            return (worst + std::pow(c.Lp / (factorial(c.p) * eps), 2.0 / (c.p + 1))) * scale;
          },
          [&](const QscClass& c) { return (c.M * c.M + c.hess_norm / eps) * scale; },
          [&](const L0L1SmoothClass& c) { return (c.L1 * c.L1 + c.L0 / eps) * scale; },
      },
      spec);
}

SuboptimalityMeasure v_measure(const Vector& g, const Vector& x, const Vector& x_star,
                               const NormContext& ctx) {
  ctx.check_dimension(x, "v_measure");
  ctx.check_dimension(x_star, "v_measure");
  const double gnorm = ctx.dual_norm(g);
  if (gnorm == 0.0) throw std::domain_error("v_measure: zero subgradient");
  const Vector diff = x - x_star;
  SuboptimalityMeasure out{g.dot(diff) / gnorm, false};
  if (out.value < 0.0 && out.value >= -1e-12 * std::max(1.0, ctx.primal_norm(diff))) {
    out.value = 0.0;
    out.clamped = true;
  }
  return out;
}

SeqMinSumBound seq_min_sum_bound(std::span<const double> d, int T) {
  if (T < 1) throw std::invalid_argument("seq_min_sum_bound: T must be >= 1");
  if (d.size() < static_cast<std::size_t>(T) + 1) {
    throw std::invalid_argument("seq_min_sum_bound: sequence shorter than T + 1");
  }
  for (std::size_t i = 0; i <= static_cast<std::size_t>(T); ++i) {
    if (!(d[i] > 0.0)) throw std::invalid_argument("seq_min_sum_bound: entries must be positive");
    if (i > 0 && d[i] < d[i - 1]) {
      throw std::invalid_argument("seq_min_sum_bound: sequence must be nondecreasing");
    }
  }
  SeqMinSumBound out;
  out.lhs = kInf;
  double prefix = 0.0;
  for (int k = 1; k <= T; ++k) {
    prefix += d[k - 1];
    out.lhs = std::min(out.lhs, d[k] / prefix);
  }
  const double ratio = d[T] / d[0];
  out.rhs = std::pow(ratio, 1.0 / T) * std::log(kE * ratio) / T;
  return out;
}

BoundInductionResult bound_induction_trial(double d0, double R, double gamma, int steps,
                                           std::uint64_t seed) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("bound_induction: gamma must lie in [0, 1)");
  }
  if (!(d0 >= 0.0) || !(R >= 0.0)) {
    throw std::invalid_argument("bound_induction: d0 and R must be nonnegative");
  }
  Rng rng(seed);
  BoundInductionResult out;
  out.bound = std::max(R / (1.0 - gamma), d0);
  // The lemma is exact in real arithmetic; allow for round-off in R + gamma d.
  const double limit = out.bound * (1.0 + 1e-12);
  double d = d0;
  out.max_iterate = d;
  for (int k = 0; k < steps; ++k) {
    const double hi = std::max(d, R + gamma * d);
    d = rng.uniform(0.0, 1.0) < 0.5 ? hi : rng.uniform(0.0, hi);
    out.max_iterate = std::max(out.max_iterate, d);
    if (d > limit) out.held = false;
  }
  return out;
}

bool bound_induction_check(double d0, double R, double gamma, int steps, std::uint64_t seed) {
  return bound_induction_trial(d0, R, gamma, steps, seed).held;
}

double rate_envelope(int prefix, const RateConstants& rc) {
  if (prefix < 1) throw std::invalid_argument("rate_envelope: prefix must be >= 1");
  return kE * rc.D / std::sqrt(static_cast<double>(prefix)) * rc.log_factor();
}

std::vector<double> rate_envelope_margins(std::span<const double> v, const RateConstants& rc) {
  std::vector<double> margins;
  margins.reserve(v.size());
  double best = kInf;
  for (std::size_t k = 0; k < v.size(); ++k) {
    best = std::min(best, v[k]);
    margins.push_back(rate_envelope(static_cast<int>(k + 1), rc) - best);
  }
  return margins;
}

}  // namespace dada
