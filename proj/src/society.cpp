#include "pandora/society.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <string>

#include "pandora/errors.hpp"
#include "pandora/parallel.hpp"

namespace pandora {

std::size_t default_worker_count() {
  if (const char* env = std::getenv("PANDORA_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string_view to_string(UtilityConvention convention) {
  switch (convention) {
    case UtilityConvention::OutsideOption:
      return "outside-option";
    case UtilityConvention::MustChoose:
      return "must-choose";
  }
  return "unknown";
}

UtilityConvention parse_utility_convention(std::string_view text) {
  if (text == "outside-option") return UtilityConvention::OutsideOption;
  if (text == "must-choose") return UtilityConvention::MustChoose;
  throw DomainError("unknown utility convention '" + std::string(text) +
                    "' (expected outside-option or must-choose)");
}

void WorldConfig::validate() const {
  if (!(sigma >= 0.0 && sigma <= 1.0)) {
    throw DomainError("sigma must lie in [0, 1], got " + std::to_string(sigma));
  }
  validate_cost(cost, diamond);
  if (rounds < 1) throw DomainError("rounds must be >= 1");
  if (runs < 1) throw DomainError("runs must be >= 1");
  if (step_cap < 1) throw DomainError("step cap must be >= 1");
  if (diamond && model == InformationModel::RevealedValue && sigma > 0.0 && sigma < 1.0) {
    throw DomainError(
        "revealed-value diamond world is only supported for sigma in {0, 1}");
  }
}

std::uint64_t WorldConfig::random_key() const {
  if (common_random_numbers) return seed;
  std::uint64_t h = KeyedRng::mix(seed);
  h = KeyedRng::mix(h ^ std::bit_cast<std::uint64_t>(sigma));
  h = KeyedRng::mix(h ^ std::bit_cast<std::uint64_t>(cost));
  h = KeyedRng::mix(h ^ static_cast<std::uint64_t>(model));
  if (diamond) {
    h = KeyedRng::mix(h ^ std::bit_cast<std::uint64_t>(diamond->p));
    h = KeyedRng::mix(h ^ std::bit_cast<std::uint64_t>(diamond->jump));
  }
  return h;
}

// ---------------------------------------------------------------------------

ItemSampler::ItemSampler(const WorldConfig& config, std::uint64_t replication)
    : rng_(config.random_key()),
      replication_(replication),
      sigma_(config.sigma),
      quality_scale_(std::sqrt(1.0 - config.sigma * config.sigma)),
      diamond_(config.diamond) {}

bool ItemSampler::is_diamond(ItemId id) const {
  return diamond_ &&
         rng_.uniform(replication_, id, KeyedRng::kNoRound, KeyedRng::Stream::Diamond) <
             diamond_->p;
}

double ItemSampler::quality_z(ItemId id) const {
  return rng_.normal(replication_, id, KeyedRng::kNoRound, KeyedRng::Stream::Quality);
}

double ItemSampler::quality(ItemId id) const {
  const double base = quality_scale_ * quality_z(id);
  return is_diamond(id) ? diamond_->jump + base : base;
}

double ItemSampler::subjective_z(ItemId id, std::int64_t round) const {
  return rng_.normal(replication_, id, static_cast<std::uint64_t>(round),
                     KeyedRng::Stream::Subjective);
}

double ItemSampler::subjective(ItemId id, std::int64_t round) const {
  return sigma_ * subjective_z(id, round);
}

// ---------------------------------------------------------------------------

namespace {

const WorldConfig& validated(const WorldConfig& config) {
  config.validate();
  return config;
}

}  // namespace

Society::Society(const WorldConfig& config, std::uint64_t replication)
    : config_(validated(config)),
      sampler_(config, replication),
      fresh_index_(fresh_item_index(config.sigma, config.cost, config.diamond)) {
  if (config_.sigma > 0.0) {
    quality_offset_ =
        reservation_value(GaussianBelief{{0.0, config_.sigma * config_.sigma}}, config_.cost);
  }
}

double Society::gaussian_offset_for_count(std::int64_t count) {
  if (offset_by_count_.size() <= static_cast<std::size_t>(count)) {
    const std::size_t old = offset_by_count_.size();
    offset_by_count_.resize(static_cast<std::size_t>(count) + 1, 0.0);
    for (std::size_t k = std::max<std::size_t>(old, 1); k < offset_by_count_.size(); ++k) {
      const GaussianSpec post =
          posterior_quality_gaussian(static_cast<std::int64_t>(k), 0.0, config_.sigma);
      const double variance = post.variance + config_.sigma * config_.sigma;
      offset_by_count_[k] = reservation_value(GaussianBelief{{0.0, variance}}, config_.cost);
    }
  }
  return offset_by_count_[static_cast<std::size_t>(count)];
}

PublicRecord Society::record(ItemId id) const {
  if (id >= items_.size()) return Unexplored{};
  const ItemState& item = items_[id];
  if (config_.model == InformationModel::RevealedQuality) return RevealedQuality{item.quality};
  return ValueStats{item.count, item.value_sum};
}

double Society::compute_index(const ItemState& item) const {
  const double sigma = config_.sigma;
  const double c = config_.cost;
  if (config_.model == InformationModel::RevealedQuality) {
    // N(q, sigma^2): q + reservation_value(N(0, sigma^2)).
    return sigma == 0.0 ? item.quality - c : item.quality + quality_offset_;
  }
  const double avg = item.value_sum / static_cast<double>(item.count);
  if (config_.diamond || sigma == 0.0) {
    return reservation_value(
        belief_for_agent(ValueStats{item.count, item.value_sum}, config_.model, sigma,
                         config_.diamond),
        c);
  }
  const GaussianSpec post = posterior_quality_gaussian(item.count, avg, sigma);
  return post.mean + offset_by_count_[static_cast<std::size_t>(item.count)];
}

double Society::compute_quality_mean(const ItemState& item) const {
  if (config_.model == InformationModel::RevealedQuality) return item.quality;
  return posterior_quality_mean(ValueStats{item.count, item.value_sum}, config_.model,
                                config_.sigma, config_.diamond);
}

double Society::max_quality() const {
  if (config_.model == InformationModel::RevealedQuality) return max_revealed_quality_;
  if (quality_means_.empty()) return 0.0;
  return std::max(0.0, quality_means_.rbegin()->first);
}

std::vector<IndexedItem> Society::opening_order() const {
  return {order_.begin(), order_.end()};
}

const SearchOutcome& Society::run_round() {
  const std::int64_t t = ++round_;
  auto fresh = [&](ItemId id) {
    ItemState item;
    item.quality = sampler_.quality(id);
    item.diamond = sampler_.is_diamond(id);
    items_.push_back(item);
    if (item.diamond && !first_diamond_round_) first_diamond_round_ = t;
    return ItemDraw{item.quality, item.quality + sampler_.subjective(id, t)};
  };
  auto explored = [&](ItemId id) {
    const double q = items_[id].quality;
    return ItemDraw{q, q + sampler_.subjective(id, t)};
  };
  run_search_ordered(order_, fresh_index_, static_cast<ItemId>(items_.size()), fresh, explored,
                     config_.cost, config_.step_cap, outcome_);

  const bool revealed_quality = config_.model == InformationModel::RevealedQuality;
  for (std::size_t j = 0; j < outcome_.opened.size(); ++j) {
    const ItemId id = outcome_.opened[j];
    ItemState& item = items_[id];
    if (revealed_quality) {
      if (!outcome_.was_fresh[j]) continue;
      item.count = 1;
      item.index = compute_index(item);
      item.quality_mean = item.quality;
      order_.insert({item.index, id});
      max_revealed_quality_ = std::max(max_revealed_quality_, item.quality);
      continue;
    }
    if (!outcome_.was_fresh[j]) {
      order_.erase({item.index, id});
      quality_means_.erase({item.quality_mean, id});
    }
    item.count += 1;
    item.value_sum += outcome_.observed_values[j];
    if (!config_.diamond && config_.sigma > 0.0) gaussian_offset_for_count(item.count);
    item.index = compute_index(item);
    item.quality_mean = compute_quality_mean(item);
    order_.insert({item.index, id});
    quality_means_.insert({item.quality_mean, id});
  }
  return outcome_;
}

// ---------------------------------------------------------------------------

ReplicationTrace run_replication(const WorldConfig& config, std::uint64_t replication) {
  Society society(config, replication);
  ReplicationTrace trace;
  const auto n = static_cast<std::size_t>(config.rounds);
  trace.utility.reserve(n);
  trace.alt_utility.reserve(n);
  trace.max_quality.reserve(n);
  trace.items_explored.reserve(n);
  trace.opened.reserve(n);
  const bool outside = config.utility_convention == UtilityConvention::OutsideOption;
  for (std::int64_t t = 1; t <= config.rounds; ++t) {
    const SearchOutcome& out = society.run_round();
    trace.utility.push_back(outside ? out.utility : out.must_choose_utility);
    trace.alt_utility.push_back(outside ? out.must_choose_utility : out.utility);
    trace.max_quality.push_back(society.max_quality());
    trace.items_explored.push_back(static_cast<std::int64_t>(society.items_explored()));
    trace.opened.push_back(static_cast<std::int64_t>(out.opened.size()));
  }
  trace.first_diamond_round = society.first_diamond_round();
  return trace;
}

namespace {

void validate_grid(const std::vector<std::int64_t>& grid, std::int64_t rounds) {
  if (grid.empty()) throw DomainError("checkpoint grid must not be empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 1 || grid[i] > rounds) {
      throw DomainError("checkpoint " + std::to_string(grid[i]) + " outside [1, rounds]");
    }
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw DomainError("checkpoint grid must be strictly increasing");
    }
  }
}

}  // namespace

std::vector<CheckpointSample> run_checkpoints(const WorldConfig& config, std::uint64_t replication,
                                              const std::vector<std::int64_t>& grid) {
  validate_grid(grid, config.rounds);
  Society society(config, replication);
  const bool outside = config.utility_convention == UtilityConvention::OutsideOption;
  std::vector<CheckpointSample> samples;
  samples.reserve(grid.size());
  double sum = 0.0;
  double alt_sum = 0.0;
  std::size_t next = 0;
  for (std::int64_t t = 1; next < grid.size(); ++t) {
    const SearchOutcome& out = society.run_round();
    sum += outside ? out.utility : out.must_choose_utility;
    alt_sum += outside ? out.must_choose_utility : out.utility;
    if (t == grid[next]) {
      const double inv = 1.0 / static_cast<double>(t);
      samples.push_back({sum * inv, alt_sum * inv, society.max_quality(),
                         static_cast<double>(society.items_explored())});
      ++next;
    }
  }
  return samples;
}

std::vector<std::int64_t> geometric_grid(std::int64_t max_rounds, int per_decade) {
  if (max_rounds < 1) throw DomainError("geometric_grid: max_rounds must be >= 1");
  if (per_decade < 1) throw DomainError("geometric_grid: per_decade must be >= 1");
  std::vector<std::int64_t> grid;
  for (int k = 0;; ++k) {
    const double value = std::round(std::pow(10.0, static_cast<double>(k) / per_decade));
    const auto t = static_cast<std::int64_t>(value);
    if (t >= max_rounds) break;
    if (grid.empty() || t > grid.back()) grid.push_back(t);
  }
  grid.push_back(max_rounds);
  return grid;
}

std::vector<CurvePoint> estimate_curve(const WorldConfig& config,
                                       const std::vector<std::int64_t>& grid,
                                       std::size_t workers) {
  config.validate();
  validate_grid(grid, config.rounds);
  struct Accumulator {
    RunningStats utility;
    RunningStats alt_utility;
    RunningStats max_quality;
    RunningStats items;
  };
  std::vector<Accumulator> acc(grid.size());
  ordered_parallel_for<std::vector<CheckpointSample>>(
      static_cast<std::uint64_t>(config.runs), workers,
      [&](std::uint64_t rep) { return run_checkpoints(config, rep, grid); },
      [&](std::uint64_t, const std::vector<CheckpointSample>& samples) {
        for (std::size_t i = 0; i < samples.size(); ++i) {
          acc[i].utility.add(samples[i].avg_utility);
          acc[i].alt_utility.add(samples[i].alt_avg_utility);
          acc[i].max_quality.add(samples[i].max_quality);
          acc[i].items.add(samples[i].items_explored);
        }
      });
  std::vector<CurvePoint> points;
  points.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CurvePoint p;
    p.sigma = config.sigma;
    p.T = grid[i];
    p.mean_avg_utility = acc[i].utility.mean();
    p.se_avg_utility = acc[i].utility.standard_error();
    p.alt_convention_utility = acc[i].alt_utility.mean();
    p.mean_max_quality = acc[i].max_quality.mean();
    p.se_max_quality = acc[i].max_quality.standard_error();
    p.mean_items_explored = acc[i].items.mean();
    p.runs = config.runs;
    points.push_back(p);
  }
  return points;
}

std::vector<CurveDifference> compare_curves(const WorldConfig& first, const WorldConfig& second,
                                            const std::vector<std::int64_t>& grid,
                                            std::size_t workers) {
  first.validate();
  second.validate();
  if (first.runs != second.runs) throw DomainError("compare_curves: run counts differ");
  validate_grid(grid, std::min(first.rounds, second.rounds));
  std::vector<RunningStats> acc(grid.size());
  using Pair = std::pair<std::vector<CheckpointSample>, std::vector<CheckpointSample>>;
  ordered_parallel_for<Pair>(
      static_cast<std::uint64_t>(first.runs), workers,
      [&](std::uint64_t rep) {
        return Pair{run_checkpoints(first, rep, grid), run_checkpoints(second, rep, grid)};
      },
      [&](std::uint64_t, const Pair& pair) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
          acc[i].add(pair.first[i].avg_utility - pair.second[i].avg_utility);
        }
      });
  std::vector<CurveDifference> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.push_back({grid[i], acc[i].mean(), acc[i].standard_error()});
  }
  return out;
}

}  // namespace pandora
