#pragma once

#include <optional>
#include <variant>

#include "pandora/gauss.hpp"

namespace pandora {

// Rare high-value component: an item's quality carries an extra `jump`
// with probability `p`.
struct DiamondParams {
  double p = 0.0;
  double jump = 0.0;

  void validate() const;
};

// Belief families an agent can hold over one item's value.
struct PointBelief {
  double value = 0.0;
};

struct GaussianBelief {
  GaussianSpec spec;
};

// theta * N(base.mean + jump, base.variance) + (1 - theta) * N(base.mean, base.variance)
struct DiamondMixtureBelief {
  double theta = 0.0;
  double jump = 0.0;
  GaussianSpec base;
};

using ValueBelief = std::variant<PointBelief, GaussianBelief, DiamondMixtureBelief>;

void validate_belief(const ValueBelief& belief);

/// Mean of the value under `belief`.
double belief_mean(const ValueBelief& belief);

/// E[max(v - strike, 0)] under `belief`, in closed form.
double expected_excess(const ValueBelief& belief, double strike);

/// Reservation value x* of N(0, 1) at the given cost. Newton on the call
/// value with a bisection safeguard inside an expanding bracket.
double standard_reservation(double cost);

/// Weitzman reservation value: the strike x* solving
/// E[max(v - x*, 0)] = cost.
///
/// Point beliefs return value - cost exactly. Gaussian beliefs use the
/// affine identity x* = mu + s * standard_reservation(cost / s). Mixtures
/// are solved on the two-component closed form.
///
/// Throws DomainError for cost <= 0 and ConvergenceError if the bracket
/// cannot be established within 64 doublings.
double reservation_value(const ValueBelief& belief, double cost);

/// Index of an item nobody has explored yet. The total value of a fresh
/// item is N(0, 1) regardless of sigma; with diamonds it is the mixture
/// p * N(D, 1) + (1 - p) * N(0, 1).
///
/// Requires 0 <= sigma <= 1, 0 < cost < 1/sqrt(2 pi), and cost >= p * D
/// when diamonds are present.
double fresh_item_index(double sigma, double cost,
                        const std::optional<DiamondParams>& diamond);

/// Throws DomainError unless 0 < cost < 1/sqrt(2 pi) (and cost >= p * D
/// with diamonds).
void validate_cost(double cost, const std::optional<DiamondParams>& diamond);

}  // namespace pandora
