#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pandora/reservation.hpp"
#include "pandora/society.hpp"

namespace pandora {

struct BoundReport {
  std::string name;
  double bound_value = 0.0;
  double observed_value = 0.0;
  bool satisfied = false;
  // Distance to the bound in the satisfied direction (negative if violated).
  double slack = 0.0;
};

/// Upper report: observed <= bound + tolerance.
BoundReport upper_report(std::string name, double bound, double observed, double tolerance);
/// Lower report: observed >= bound - tolerance.
BoundReport lower_report(std::string name, double bound, double observed, double tolerance);

/// Plateau of the homogeneous society: sqrt(ln(1 / (2 pi c^2))) + 2.
double plateau_bound(double cost);

/// sqrt(1 - sigma^2) * sqrt(2 ln(1 + sigma^2 ln T)), the closed-form shape of
/// A(sigma, T) up to an additive constant.
double prop_inter_estimate(double sigma, double T);

struct DiamondBounds {
  double lower_for_sigma1 = 0.0;
  double upper_for_sigma0 = 0.0;
  double upper_for_intermediate = 0.0;
  // Reservation value of a fresh item in the diamond world.
  double fresh_index = 0.0;
  // Round t attaining lower_for_sigma1.
  std::int64_t best_round = 0;
};

/// Diamond-world bounds:
///   lower_for_sigma1 = max_t (1 - (1 - p)^t)(1 - t/T)(D - c),
///   upper_for_sigma0 = D p + x* + 1,
///   upper_for_intermediate = prop_inter_estimate(sigma, T)
///       + p D (2 sigma^2 ln D + 2 sigma^2 ln T) / (1 - Phi((x* + c + 1) / sqrt(1 - sigma^2))),
/// with x* the fresh-item index of the diamond world. The last one is +inf at
/// sigma = 1.
DiamondBounds diamond_bounds(const DiamondParams& diamond, double sigma, double cost,
                             std::int64_t T);

struct CoupledTraces {
  // Items explored after each round by the actual process, I(t).
  std::vector<std::int64_t> actual;
  // Items reached after each round by the dominating coin process, I'(t).
  std::vector<std::int64_t> dominating;
};

/// Runs the revealed-quality process at (sigma, cost) for T rounds together
/// with the dominating process that scans items in order of first
/// exploration and, at each item whose quality is at least x* + c + 1, stops
/// when the coin s_{i,t} >= -1 comes up heads. Both processes read the same
/// keyed draws, so I(t) <= I'(t) holds pathwise.
CoupledTraces coupled_upper_process(double sigma, double cost, std::int64_t T, std::uint64_t seed,
                                    std::uint64_t replication = 0);

struct TailEstimate {
  double probability = 0.0;
  double standard_error = 0.0;
};

/// Monte Carlo estimate of Pr[min_{i <= T} (x_1 + ... + x_i) / i <= -2 sigma]
/// for x_i ~ N(0, sigma^2). Returns 0 at sigma = 0. Each run uses the prefix
/// of one fixed stream, so estimates are monotone in T for a fixed seed.
TailEstimate prefix_average_tail(double sigma, std::int64_t T, std::int64_t runs,
                                 std::uint64_t seed);

struct TruncatedMaxEstimate {
  double mean_max = 0.0;
  double standard_error = 0.0;
  // sigma * sqrt(2 ln 2T) + x*
  double bound = 0.0;
};

/// Draws T samples of N(0, sigma^2) conditioned on >= x_star, `runs` times,
/// and reports the mean of the maximum against sigma sqrt(2 ln 2T) + x_star.
TruncatedMaxEstimate truncated_max_bound(double sigma, double x_star, std::int64_t T,
                                         std::int64_t runs, std::uint64_t seed);

// Slack constants standing in for the unspecified O(1) terms.
inline constexpr double kShapeTolerance = 3.0;
inline constexpr double kSandwichUpperConstant = 6.0;
inline constexpr double kStandardErrorMultiplier = 4.0;

/// Checks a set of curves (one per sigma, same cost/model/grid) against
/// every applicable closed-form bound.
std::vector<BoundReport> check_curve_bounds(const WorldConfig& config,
                                            const std::vector<CurvePoint>& points);

/// Cross-sigma checks, e.g. A(1, T) <= A(0, T).
std::vector<BoundReport> check_ordering_bounds(const std::vector<WorldConfig>& configs,
                                               const std::vector<std::vector<CurvePoint>>& curves);

}  // namespace pandora
