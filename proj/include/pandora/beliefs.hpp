#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>

#include "pandora/gauss.hpp"
#include "pandora/reservation.hpp"

namespace pandora {

enum class InformationModel {
  RevealedQuality,  // society learns q_i once item i is explored
  RevealedValue,    // society learns only the realized values v_{i,t}
};

std::string_view to_string(InformationModel model);
InformationModel parse_information_model(std::string_view text);

// What the society has seen about one item.
struct Unexplored {};
struct RevealedQuality {
  double quality = 0.0;
};
// Sufficient statistic of the observed values: the average is value_sum / count.
struct ValueStats {
  std::int64_t count = 0;
  double value_sum = 0.0;
};

using PublicRecord = std::variant<Unexplored, RevealedQuality, ValueStats>;

/// Conjugate-normal posterior of q ~ N(0, 1 - sigma^2) after `k` observations
/// q + s_j with s_j ~ N(0, sigma^2) whose average is `avg_value`:
///   N(avg * (1 - s2) / ((1 - s2) + s2 / k),  (1 - s2) s2 / (k (1 - s2) + s2)).
/// The closed form stays well defined at sigma = 0 (mean = avg, variance 0)
/// and sigma = 1 (mean 0, variance 0).
GaussianSpec posterior_quality_gaussian(std::int64_t k, double avg_value, double sigma);

/// Posterior probability that an item is a diamond given `k` observed values
/// with average `avg_value`, when every observation is d + s with s ~ N(0, 1)
/// (sigma = 1). Evaluated as a logistic of the log-likelihood ratio.
double posterior_diamond_theta(std::int64_t k, double avg_value, double p, double jump,
                               double sigma);

/// The belief an arriving agent holds over her value for an item.
///
/// Throws DomainError when the record does not belong to `model`, and for
/// the revealed-value diamond world at sigma strictly between 0 and 1 (no
/// posterior is defined there).
ValueBelief belief_for_agent(const PublicRecord& record, InformationModel model, double sigma,
                             const std::optional<DiamondParams>& diamond);

/// Posterior mean of an item's quality given its public record. Used for
/// the best-known-quality statistic.
double posterior_quality_mean(const PublicRecord& record, InformationModel model, double sigma,
                              const std::optional<DiamondParams>& diamond);

}  // namespace pandora
