#include "pandora/reservation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "pandora/errors.hpp"

namespace pandora {

namespace {

constexpr int kMaxDoublings = 64;
constexpr int kMaxIterations = 200;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive_cost(double cost) {
  if (!(cost > 0.0) || !std::isfinite(cost)) {
    throw DomainError("reservation_value: cost must be > 0");
  }
}

// Expands [lo, hi] around `start` until f(lo) > 0 > f(hi) for a strictly
// decreasing f.
template <class F>
void expand_bracket(const F& f, double start, double scale, double& lo, double& hi) {
  double step = scale;
  lo = start - step;
  hi = start + step;
  int doublings = 0;
  while (f(lo) <= 0.0) {
    if (++doublings > kMaxDoublings) {
      throw ConvergenceError("reservation_value: could not bracket root (lower side)");
    }
    step *= 2.0;
    lo = start - step;
  }
  step = scale;
  doublings = 0;
  while (f(hi) >= 0.0) {
    if (++doublings > kMaxDoublings) {
      throw ConvergenceError("reservation_value: could not bracket root (upper side)");
    }
    step *= 2.0;
    hi = start + step;
  }
}

// Safeguarded Newton for a decreasing, convex residual with derivative
// `df`. Falls back to bisection whenever the Newton iterate leaves the
// bracket.
template <class F, class DF>
double safeguarded_newton(const F& f, const DF& df, double lo, double hi, double x) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int i = 0; i < kMaxIterations; ++i) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 2.0 * eps * std::max(1.0, std::abs(x))) return x;
    const double slope = df(x);
    const double mid = 0.5 * (lo + hi);
    // The call value is only monotone up to rounding, so an iterate that
    // lands back on a bracket end would cycle; bisect instead.
    double next = (slope < 0.0) ? x - fx / slope : mid;
    // A Newton step below rounding level means x is already the root.
    if (slope < 0.0 && std::abs(fx / slope) <= 4.0 * eps * std::max(1.0, std::abs(x))) return x;
    if (!(next > lo && next < hi)) next = mid;
    if (next <= lo || next >= hi) return x;
    if (std::abs(next - x) <= eps * std::max(1.0, std::abs(x))) return next;
    x = next;
  }
  throw ConvergenceError("reservation_value: iteration limit reached");
}

double mixture_call(const DiamondMixtureBelief& m, double strike) {
  const double high = gaussian_call(m.base.mean + m.jump, m.base.variance, strike);
  const double low = gaussian_call(m.base.mean, m.base.variance, strike);
  return m.theta * high + (1.0 - m.theta) * low;
}

double mixture_tail(const DiamondMixtureBelief& m, double strike) {
  const double s = m.base.stddev();
  if (s == 0.0) {
    const double high = (m.base.mean + m.jump > strike) ? 1.0 : 0.0;
    const double low = (m.base.mean > strike) ? 1.0 : 0.0;
    return m.theta * high + (1.0 - m.theta) * low;
  }
  return m.theta * std_sf((strike - m.base.mean - m.jump) / s) +
         (1.0 - m.theta) * std_sf((strike - m.base.mean) / s);
}

double mixture_reservation(const DiamondMixtureBelief& m, double cost) {
  const auto f = [&](double x) { return mixture_call(m, x) - cost; };
  const auto df = [&](double x) { return -mixture_tail(m, x); };
  const double start = m.base.mean + m.theta * m.jump;
  double lo = 0.0;
  double hi = 0.0;
  expand_bracket(f, start, 1.0 + m.jump, lo, hi);
  return safeguarded_newton(f, df, lo, hi, start);
}

}  // namespace

void DiamondParams::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("diamond: p must lie in (0, 1)");
  if (!(jump > 0.0) || !std::isfinite(jump)) throw DomainError("diamond: D must be > 0");
}

void validate_belief(const ValueBelief& belief) {
  std::visit(Overloaded{
                 [](const PointBelief& b) {
                   if (!std::isfinite(b.value)) throw DomainError("point belief: non-finite value");
                 },
                 [](const GaussianBelief& b) { b.spec.validate(); },
                 [](const DiamondMixtureBelief& b) {
                   b.base.validate();
                   if (!(b.theta >= 0.0 && b.theta <= 1.0)) {
                     throw DomainError("mixture belief: theta must lie in [0, 1]");
                   }
                   if (!(b.jump > 0.0)) throw DomainError("mixture belief: jump must be > 0");
                 },
             },
             belief);
}

double belief_mean(const ValueBelief& belief) {
  return std::visit(Overloaded{
                        [](const PointBelief& b) { return b.value; },
                        [](const GaussianBelief& b) { return b.spec.mean; },
                        [](const DiamondMixtureBelief& b) {
                          return b.base.mean + b.theta * b.jump;
                        },
                    },
                    belief);
}

double expected_excess(const ValueBelief& belief, double strike) {
  return std::visit(Overloaded{
                        [&](const PointBelief& b) { return std::max(b.value - strike, 0.0); },
                        [&](const GaussianBelief& b) {
                          return gaussian_call(b.spec.mean, b.spec.variance, strike);
                        },
                        [&](const DiamondMixtureBelief& b) { return mixture_call(b, strike); },
                    },
                    belief);
}

double standard_reservation(double cost) {
  require_positive_cost(cost);
  const auto f = [cost](double x) { return unit_call(x) - cost; };
  const auto df = [](double x) { return -std_sf(x); };
  double lo = 0.0;
  double hi = 0.0;
  expand_bracket(f, 0.0, 1.0, lo, hi);
  // Starting left of the root makes Newton monotone on a convex residual.
  return safeguarded_newton(f, df, lo, hi, lo);
}

double reservation_value(const ValueBelief& belief, double cost) {
  require_positive_cost(cost);
  validate_belief(belief);
  return std::visit(Overloaded{
                        [&](const PointBelief& b) { return b.value - cost; },
                        [&](const GaussianBelief& b) {
                          if (b.spec.degenerate()) return b.spec.mean - cost;
                          const double s = b.spec.stddev();
                          return b.spec.mean + s * standard_reservation(cost / s);
                        },
                        [&](const DiamondMixtureBelief& b) { return mixture_reservation(b, cost); },
                    },
                    belief);
}

void validate_cost(double cost, const std::optional<DiamondParams>& diamond) {
  if (!(cost > 0.0 && cost < kInvSqrt2Pi)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "cost must satisfy 0 < c < 1/sqrt(2 pi) = " << kInvSqrt2Pi << ", got " << cost;
    throw DomainError(msg.str());
  }
  if (diamond) {
    diamond->validate();
    if (cost < diamond->p * diamond->jump) {
      throw DomainError("diamond model requires cost >= p * D");
    }
  }
}

double fresh_item_index(double sigma, double cost, const std::optional<DiamondParams>& diamond) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw DomainError("sigma must lie in [0, 1]");
  validate_cost(cost, diamond);
  if (!diamond) return reservation_value(GaussianBelief{{0.0, 1.0}}, cost);
  return reservation_value(DiamondMixtureBelief{diamond->p, diamond->jump, {0.0, 1.0}}, cost);
}

}  // namespace pandora
