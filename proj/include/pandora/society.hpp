#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "pandora/beliefs.hpp"
#include "pandora/reservation.hpp"
#include "pandora/rng.hpp"
#include "pandora/search.hpp"

namespace pandora {

enum class UtilityConvention {
  OutsideOption,  // the agent may walk away with value 0
  MustChoose,     // the agent keeps her best explored item
};

std::string_view to_string(UtilityConvention convention);
UtilityConvention parse_utility_convention(std::string_view text);

struct WorldConfig {
  double sigma = 0.5;
  double cost = 0.1;
  std::int64_t rounds = 100;
  InformationModel model = InformationModel::RevealedQuality;
  std::optional<DiamondParams> diamond;
  std::int64_t runs = 1000;
  std::uint64_t seed = 1;
  bool common_random_numbers = true;
  UtilityConvention utility_convention = UtilityConvention::OutsideOption;
  std::size_t step_cap = kDefaultStepCap;

  /// Throws DomainError naming the violated invariant.
  void validate() const;

  /// Key of the random source. With common random numbers this is the seed
  /// alone, so worlds that differ only in sigma (or cost, model) share every
  /// standardized draw; otherwise the world parameters are folded in.
  std::uint64_t random_key() const;
};

// Monte Carlo estimates at one checkpoint T.
struct CurvePoint {
  double sigma = 0.0;
  std::int64_t T = 0;
  double mean_avg_utility = 0.0;
  double se_avg_utility = 0.0;
  double alt_convention_utility = 0.0;
  double mean_max_quality = 0.0;
  double se_max_quality = 0.0;
  double mean_items_explored = 0.0;
  std::int64_t runs = 0;
};

// Draws of the item world for one replication. Item ids are assigned in the
// order items are first explored, so the i-th explored item always gets the
// standardized draws keyed by i.
class ItemSampler {
 public:
  ItemSampler(const WorldConfig& config, std::uint64_t replication);

  bool is_diamond(ItemId id) const;
  // Standardized quality draw (before scaling by sqrt(1 - sigma^2)).
  double quality_z(ItemId id) const;
  double quality(ItemId id) const;
  // Standardized subjective draw for item `id` in round `round` (1-based).
  double subjective_z(ItemId id, std::int64_t round) const;
  double subjective(ItemId id, std::int64_t round) const;

 private:
  KeyedRng rng_;
  std::uint64_t replication_;
  double sigma_;
  double quality_scale_;
  std::optional<DiamondParams> diamond_;
};

// One replication of the T-round social process. Holds the public history
// and the persistent opening order of explored items; only items opened in
// a round have their reservation values recomputed.
class Society {
 public:
  Society(const WorldConfig& config, std::uint64_t replication);

  /// Runs the next agent's search and folds what she saw into the history.
  const SearchOutcome& run_round();

  std::int64_t rounds_played() const { return round_; }
  std::size_t items_explored() const { return items_.size(); }
  double fresh_index() const { return fresh_index_; }

  /// Best known quality, clamped at 0: the true maximum explored quality
  /// under revealed quality, the largest posterior mean under revealed value.
  double max_quality() const;

  PublicRecord record(ItemId id) const;
  double true_quality(ItemId id) const { return items_.at(id).quality; }
  bool is_diamond(ItemId id) const { return items_.at(id).diamond; }
  /// Reservation value currently assigned to explored item `id`.
  double current_index(ItemId id) const { return items_.at(id).index; }
  /// Explored items in opening order.
  std::vector<IndexedItem> opening_order() const;

  /// Round in which the first diamond was opened.
  std::optional<std::int64_t> first_diamond_round() const { return first_diamond_round_; }

  const WorldConfig& config() const { return config_; }

 private:
  struct ItemState {
    double quality = 0.0;
    bool diamond = false;
    std::int64_t count = 0;
    double value_sum = 0.0;
    double index = 0.0;
    double quality_mean = 0.0;
  };

  double compute_index(const ItemState& item) const;
  double compute_quality_mean(const ItemState& item) const;
  double gaussian_offset_for_count(std::int64_t count);

  WorldConfig config_;
  ItemSampler sampler_;
  double fresh_index_;
  double quality_offset_ = 0.0;
  std::vector<double> offset_by_count_;
  std::int64_t round_ = 0;
  std::vector<ItemState> items_;
  std::set<IndexedItem, OpeningOrder> order_;
  std::set<std::pair<double, ItemId>> quality_means_;
  double max_revealed_quality_ = 0.0;
  std::optional<std::int64_t> first_diamond_round_;
  SearchOutcome outcome_;
};

// Per-round sample path of one replication.
struct ReplicationTrace {
  std::vector<double> utility;
  std::vector<double> alt_utility;
  std::vector<double> max_quality;
  std::vector<std::int64_t> items_explored;
  std::vector<std::int64_t> opened;
  std::optional<std::int64_t> first_diamond_round;
};

ReplicationTrace run_replication(const WorldConfig& config, std::uint64_t replication);

// Replication-level statistics at one checkpoint.
struct CheckpointSample {
  double avg_utility = 0.0;
  double alt_avg_utility = 0.0;
  double max_quality = 0.0;
  double items_explored = 0.0;
};

/// Runs one replication up to the last checkpoint and returns the running
/// averages at each checkpoint.
std::vector<CheckpointSample> run_checkpoints(const WorldConfig& config, std::uint64_t replication,
                                              const std::vector<std::int64_t>& grid);

/// Geometric checkpoint grid with `per_decade` points per decade in
/// [1, max_rounds], always ending at max_rounds.
std::vector<std::int64_t> geometric_grid(std::int64_t max_rounds, int per_decade = 20);

/// Estimates A(sigma, T), M(sigma, T) and the explored-item count at every
/// checkpoint. Replications run on `workers` threads; the reduction is in
/// replication order, so results are bitwise independent of `workers`.
std::vector<CurvePoint> estimate_curve(const WorldConfig& config,
                                       const std::vector<std::int64_t>& grid,
                                       std::size_t workers);

// Paired difference A(first) - A(second) at one checkpoint.
struct CurveDifference {
  std::int64_t T = 0;
  double mean = 0.0;
  double se = 0.0;
};

/// Paired estimate of A(first, T) - A(second, T); replication r of both worlds
/// uses the same replication key.
std::vector<CurveDifference> compare_curves(const WorldConfig& first, const WorldConfig& second,
                                            const std::vector<std::int64_t>& grid,
                                            std::size_t workers);

// Running mean and variance (Welford).
class RunningStats {
 public:
  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }
  std::int64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double standard_error() const {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace pandora
