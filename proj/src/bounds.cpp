#include "pandora/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pandora/errors.hpp"
#include "pandora/gauss.hpp"
#include "pandora/rng.hpp"

namespace pandora {

namespace {

std::string label(std::string_view what, double sigma, std::int64_t T) {
  std::ostringstream out;
  out << what << "[sigma=" << sigma << ",T=" << T << "]";
  return out.str();
}

double combined(double a, double b) { return std::sqrt(a * a + b * b); }

}  // namespace

BoundReport upper_report(std::string name, double bound, double observed, double tolerance) {
  const double slack = bound + tolerance - observed;
  return {std::move(name), bound, observed, slack >= 0.0, slack};
}

BoundReport lower_report(std::string name, double bound, double observed, double tolerance) {
  const double slack = observed + tolerance - bound;
  return {std::move(name), bound, observed, slack >= 0.0, slack};
}

double plateau_bound(double cost) {
  validate_cost(cost, std::nullopt);
  // 1/(2 pi c^2) >= 1 on the valid cost range; clamp the rounding at the edge.
  return std::sqrt(std::max(0.0, std::log(1.0 / (2.0 * M_PI * cost * cost)))) + 2.0;
}

double prop_inter_estimate(double sigma, double T) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("prop_inter_estimate: sigma in (0, 1)");
  if (!(T >= 1.0)) throw DomainError("prop_inter_estimate: T must be >= 1");
  const double s2 = sigma * sigma;
  return std::sqrt(1.0 - s2) * std::sqrt(2.0 * std::log1p(s2 * std::log(T)));
}

DiamondBounds diamond_bounds(const DiamondParams& diamond, double sigma, double cost,
                             std::int64_t T) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw DomainError("diamond_bounds: sigma in [0, 1]");
  if (T < 1) throw DomainError("diamond_bounds: T must be >= 1");
  validate_cost(cost, diamond);
  const double p = diamond.p;
  const double D = diamond.jump;
  DiamondBounds out;
  out.fresh_index = fresh_item_index(sigma, cost, diamond);

  const double log_keep = std::log1p(-p);
  const auto horizon = static_cast<double>(T);
  out.lower_for_sigma1 = -std::numeric_limits<double>::infinity();
  for (std::int64_t t = 1; t <= T; ++t) {
    const double found = -std::expm1(static_cast<double>(t) * log_keep);
    const double value = found * (1.0 - static_cast<double>(t) / horizon) * (D - cost);
    if (value > out.lower_for_sigma1) {
      out.lower_for_sigma1 = value;
      out.best_round = t;
    }
  }

  out.upper_for_sigma0 = D * p + out.fresh_index + 1.0;

  if (sigma >= 1.0) {
    out.upper_for_intermediate = std::numeric_limits<double>::infinity();
  } else {
    const double s2 = sigma * sigma;
    const double shape = sigma > 0.0 ? prop_inter_estimate(sigma, horizon) : 0.0;
    const double tail = std_sf((out.fresh_index + cost + 1.0) / std::sqrt(1.0 - s2));
    const double extra = p * D * (2.0 * s2 * std::log(D) + 2.0 * s2 * std::log(horizon)) / tail;
    out.upper_for_intermediate = shape + extra;
  }
  return out;
}

CoupledTraces coupled_upper_process(double sigma, double cost, std::int64_t T, std::uint64_t seed,
                                    std::uint64_t replication) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("coupled_upper_process: sigma in (0, 1)");
  if (T < 1) throw DomainError("coupled_upper_process: T must be >= 1");
  WorldConfig config;
  config.sigma = sigma;
  config.cost = cost;
  config.rounds = T;
  config.model = InformationModel::RevealedQuality;
  config.runs = 1;
  config.seed = seed;
  config.common_random_numbers = true;
  Society society(config, replication);
  const ItemSampler sampler(config, replication);
  const double threshold = society.fresh_index() + cost + 1.0;

  std::vector<ItemId> high;  // ids with quality >= threshold, increasing
  ItemId scanned = 0;
  auto high_item = [&](std::size_t k) {
    while (high.size() <= k) {
      if (sampler.quality(scanned) >= threshold) high.push_back(scanned);
      ++scanned;
    }
    return high[k];
  };

  CoupledTraces traces;
  traces.actual.reserve(static_cast<std::size_t>(T));
  traces.dominating.reserve(static_cast<std::size_t>(T));
  std::int64_t reached = 0;
  for (std::int64_t t = 1; t <= T; ++t) {
    society.run_round();
    traces.actual.push_back(static_cast<std::int64_t>(society.items_explored()));
    for (std::size_t k = 0;; ++k) {
      const ItemId id = high_item(k);
      if (sampler.subjective(id, t) >= -1.0) {
        reached = std::max(reached, static_cast<std::int64_t>(id) + 1);
        break;
      }
    }
    traces.dominating.push_back(reached);
  }
  return traces;
}

TailEstimate prefix_average_tail(double sigma, std::int64_t T, std::int64_t runs,
                                 std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw DomainError("prefix_average_tail: sigma must be >= 0");
  if (T < 1 || runs < 1) throw DomainError("prefix_average_tail: T and runs must be >= 1");
  if (sigma == 0.0) return {0.0, 0.0};
  const KeyedRng rng(seed);
  RunningStats hits;
  for (std::int64_t r = 0; r < runs; ++r) {
    double sum = 0.0;
    bool hit = false;
    for (std::int64_t i = 1; i <= T && !hit; ++i) {
      sum += sigma * rng.normal(static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(i), 0,
                                KeyedRng::Stream::Auxiliary);
      hit = sum / static_cast<double>(i) <= -2.0 * sigma;
    }
    hits.add(hit ? 1.0 : 0.0);
  }
  return {hits.mean(), hits.standard_error()};
}

TruncatedMaxEstimate truncated_max_bound(double sigma, double x_star, std::int64_t T,
                                         std::int64_t runs, std::uint64_t seed) {
  if (!(sigma > 0.0)) throw DomainError("truncated_max_bound: sigma must be > 0");
  if (T < 1 || runs < 1) throw DomainError("truncated_max_bound: T and runs must be >= 1");
  const KeyedRng rng(seed);
  const double tail = std_sf(x_star / sigma);
  RunningStats maxima;
  for (std::int64_t r = 0; r < runs; ++r) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i < T; ++i) {
      const double u = rng.uniform(static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(i),
                                   1, KeyedRng::Stream::Auxiliary);
      // Inverse upper tail restricted to [x_star / sigma, inf).
      const double z = -std_quantile(u * tail);
      best = std::max(best, sigma * z);
    }
    maxima.add(best);
  }
  const double bound = sigma * std::sqrt(2.0 * std::log(2.0 * static_cast<double>(T))) + x_star;
  return {maxima.mean(), maxima.standard_error(), bound};
}

std::vector<BoundReport> check_curve_bounds(const WorldConfig& config,
                                            const std::vector<CurvePoint>& points) {
  std::vector<BoundReport> reports;
  const double sigma = config.sigma;
  const double c = config.cost;
  const double k = kStandardErrorMultiplier;

  if (config.diamond) {
    for (const CurvePoint& p : points) {
      const DiamondBounds b = diamond_bounds(*config.diamond, sigma, c, p.T);
      if (sigma == 1.0) {
        reports.push_back(lower_report(label("diamond_full_diversity_lower", sigma, p.T),
                                       b.lower_for_sigma1, p.mean_avg_utility,
                                       k * p.se_avg_utility));
      } else if (sigma == 0.0) {
        reports.push_back(upper_report(label("diamond_no_diversity_upper", sigma, p.T),
                                       b.upper_for_sigma0, p.mean_avg_utility,
                                       k * p.se_avg_utility));
      }
    }
    return reports;
  }

  if (sigma == 0.0) {
    const double bound = plateau_bound(c);
    for (const CurvePoint& p : points) {
      reports.push_back(upper_report(label("plateau", sigma, p.T), bound, p.mean_avg_utility,
                                     k * p.se_avg_utility));
    }
    return reports;
  }
  if (sigma == 1.0 || config.model != InformationModel::RevealedQuality) return reports;

  const double x_star = fresh_item_index(sigma, c, std::nullopt);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const CurvePoint& p = points[i];
    const double estimate = prop_inter_estimate(sigma, static_cast<double>(p.T));
    const double gap = std::abs(p.mean_avg_utility - estimate);
    reports.push_back({label("shape", sigma, p.T), estimate, p.mean_avg_utility,
                       gap <= kShapeTolerance, kShapeTolerance - gap});

    reports.push_back(upper_report(
        label("sandwich_upper", sigma, p.T), p.mean_max_quality + x_star + kSandwichUpperConstant,
        p.mean_avg_utility, k * combined(p.se_avg_utility, p.se_max_quality)));

    // Largest checkpoint T' <= T/2; the lower side holds for gamma = T'/T.
    const CurvePoint* half = nullptr;
    for (std::size_t j = 0; j < i; ++j) {
      if (2 * points[j].T <= p.T) half = &points[j];
    }
    if (half == nullptr) continue;
    const double gamma = static_cast<double>(half->T) / static_cast<double>(p.T);
    const double lower = (1.0 - gamma) * (half->mean_max_quality - c);
    reports.push_back(lower_report(label("sandwich_lower", sigma, p.T), lower, p.mean_avg_utility,
                                   k * combined(p.se_avg_utility,
                                                (1.0 - gamma) * half->se_max_quality)));
  }
  return reports;
}

std::vector<BoundReport> check_ordering_bounds(const std::vector<WorldConfig>& configs,
                                               const std::vector<std::vector<CurvePoint>>& curves) {
  std::vector<BoundReport> reports;
  for (std::size_t a = 0; a < configs.size(); ++a) {
    if (configs[a].sigma != 1.0 || configs[a].diamond) continue;
    for (std::size_t b = 0; b < configs.size(); ++b) {
      const WorldConfig& base = configs[b];
      if (base.sigma != 0.0 || base.diamond || base.cost != configs[a].cost ||
          base.model != configs[a].model) {
        continue;
      }
      for (const CurvePoint& full : curves[a]) {
        for (const CurvePoint& none : curves[b]) {
          if (none.T != full.T) continue;
          reports.push_back(upper_report(
              label("full_below_none", 1.0, full.T), none.mean_avg_utility, full.mean_avg_utility,
              kStandardErrorMultiplier * combined(full.se_avg_utility, none.se_avg_utility)));
        }
      }
    }
  }
  return reports;
}

}  // namespace pandora
