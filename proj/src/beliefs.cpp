#include "pandora/beliefs.hpp"

#include <cmath>
#include <string>

#include "pandora/errors.hpp"

namespace pandora {

namespace {

void require_sigma(double sigma) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw DomainError("sigma must lie in [0, 1]");
}

void require_count(std::int64_t k) {
  if (k < 1) throw DomainError("observation count must be >= 1, got " + std::to_string(k));
}

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

ValueBelief gaussian_or_point(double mean, double variance) {
  if (variance == 0.0) return PointBelief{mean};
  return GaussianBelief{{mean, variance}};
}

}  // namespace

std::string_view to_string(InformationModel model) {
  switch (model) {
    case InformationModel::RevealedQuality:
      return "revealed-quality";
    case InformationModel::RevealedValue:
      return "revealed-value";
  }
  return "unknown";
}

InformationModel parse_information_model(std::string_view text) {
  if (text == "revealed-quality") return InformationModel::RevealedQuality;
  if (text == "revealed-value") return InformationModel::RevealedValue;
  throw DomainError("unknown information model '" + std::string(text) +
                    "' (expected revealed-quality or revealed-value)");
}

GaussianSpec posterior_quality_gaussian(std::int64_t k, double avg_value, double sigma) {
  require_count(k);
  require_sigma(sigma);
  const double s2 = sigma * sigma;
  const double q2 = 1.0 - s2;
  const double kk = static_cast<double>(k);
  const double mean = avg_value * q2 / (q2 + s2 / kk);
  const double variance = q2 * s2 / (kk * q2 + s2);
  return {mean, variance};
}

double posterior_diamond_theta(std::int64_t k, double avg_value, double p, double jump,
                               double sigma) {
  require_count(k);
  if (sigma != 1.0) {
    throw DomainError("posterior_diamond_theta is only defined for sigma = 1");
  }
  DiamondParams{p, jump}.validate();
  // log L_D - log L_0 for the k-sample mean of N(0, 1), factored to avoid
  // cancelling two large squares.
  const double log_ratio = static_cast<double>(k) * jump * (2.0 * avg_value - jump) / 2.0;
  const double prior_logit = std::log(p) - std::log1p(-p);
  return logistic(prior_logit + log_ratio);
}

ValueBelief belief_for_agent(const PublicRecord& record, InformationModel model, double sigma,
                             const std::optional<DiamondParams>& diamond) {
  require_sigma(sigma);
  if (std::holds_alternative<Unexplored>(record)) {
    if (diamond) return DiamondMixtureBelief{diamond->p, diamond->jump, {0.0, 1.0}};
    return GaussianBelief{{0.0, 1.0}};
  }
  if (const auto* rq = std::get_if<RevealedQuality>(&record)) {
    if (model != InformationModel::RevealedQuality) {
      throw DomainError("revealed quality record under the revealed-value model");
    }
    return gaussian_or_point(rq->quality, sigma * sigma);
  }
  const auto& stats = std::get<ValueStats>(record);
  if (model != InformationModel::RevealedValue) {
    throw DomainError("value statistics record under the revealed-quality model");
  }
  require_count(stats.count);
  const double avg = stats.value_sum / static_cast<double>(stats.count);
  if (diamond) {
    if (sigma == 0.0) return PointBelief{avg};
    if (sigma == 1.0) {
      const double theta =
          posterior_diamond_theta(stats.count, avg, diamond->p, diamond->jump, sigma);
      return DiamondMixtureBelief{theta, diamond->jump, {0.0, 1.0}};
    }
    throw DomainError(
        "revealed-value diamond world is only supported for sigma in {0, 1}");
  }
  const GaussianSpec post = posterior_quality_gaussian(stats.count, avg, sigma);
  return gaussian_or_point(post.mean, post.variance + sigma * sigma);
}

double posterior_quality_mean(const PublicRecord& record, InformationModel model, double sigma,
                              const std::optional<DiamondParams>& diamond) {
  const ValueBelief belief = belief_for_agent(record, model, sigma, diamond);
  if (std::holds_alternative<Unexplored>(record)) return belief_mean(belief);
  if (const auto* rq = std::get_if<RevealedQuality>(&record)) return rq->quality;
  // The subjective score has mean zero, so the value mean is the quality mean.
  return belief_mean(belief);
}

}  // namespace pandora
