#include <cmath>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "pandora/errors.hpp"
#include "pandora/rng.hpp"
#include "pandora/search.hpp"
#include "pandora/society.hpp"

using namespace pandora;

namespace {

struct Transcript {
  SearchOutcome out;
  std::vector<double> indices;  // index of each opened item
};

// One search over `n` explored gaussian items with random beliefs; values
// are drawn from the beliefs themselves.
Transcript random_search(std::uint64_t seed, int n, double cost) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> z;
  std::vector<ValueBelief> beliefs;
  for (int i = 0; i < n; ++i) {
    if (i % 3 == 0) beliefs.push_back(PointBelief{3.0 * u(gen) - 1.0});
    else beliefs.push_back(GaussianBelief{{2.0 * u(gen) - 1.0, 0.5 * u(gen) + 0.01}});
  }
  const double fresh_index = standard_reservation(cost);
  auto draw = [&](ItemId id) -> ItemDraw {
    if (id >= beliefs.size()) {
      const double v = z(gen);
      return {v, v};
    }
    if (auto* p = std::get_if<PointBelief>(&beliefs[id])) return {p->value, p->value};
    const auto& g = std::get<GaussianBelief>(beliefs[id]).spec;
    const double v = g.mean + g.stddev() * z(gen);
    return {g.mean, v};
  };
  Transcript t;
  t.out = run_search(beliefs, fresh_index, draw, draw, cost);
  for (ItemId id : t.out.opened) {
    t.indices.push_back(id < beliefs.size() ? reservation_value(beliefs[id], cost) : fresh_index);
  }
  return t;
}

}  // namespace

TEST_CASE("dominant point box is opened alone") {
  std::vector<ValueBelief> beliefs{PointBelief{5.0}};
  int fresh_calls = 0;
  auto fresh = [&](ItemId) {
    ++fresh_calls;
    return ItemDraw{0.0, 0.0};
  };
  auto explored = [](ItemId) { return ItemDraw{5.0, 5.0}; };
  const auto out = run_search(beliefs, standard_reservation(0.1), fresh, explored, 0.1);
  REQUIRE(out.opened.size() == 1);
  CHECK(out.opened[0] == 0);
  CHECK_FALSE(out.was_fresh[0]);
  CHECK(out.utility == doctest::Approx(4.9));
  CHECK(fresh_calls == 0);
}

TEST_CASE("fresh items only: stop at the first value above the index") {
  const std::vector<double> values{0.1, -0.5, 0.7, 1.2, 3.0};
  auto fresh = [&](ItemId id) { return ItemDraw{values[id], values[id]}; };
  auto explored = [](ItemId) -> ItemDraw { FAIL("no explored items"); return {}; };
  const auto out = run_search({}, 0.902, fresh, explored, 0.1);
  CHECK(out.opened == std::vector<ItemId>{0, 1, 2, 3});
  CHECK(out.utility == doctest::Approx(1.2 - 0.4));
  CHECK(out.best_explored == 3);
}

TEST_CASE("the two utility conventions agree whenever the search stops") {
  // Stopping needs best >= fresh index > 0, so the outside option never binds.
  std::vector<ValueBelief> beliefs{GaussianBelief{{0.0, 1.0}}};
  auto explored = [](ItemId) { return ItemDraw{0.0, -2.0}; };
  auto fresh = [](ItemId) { return ItemDraw{1.0, 1.0}; };
  const auto out = run_search(beliefs, 0.5, fresh, explored, 0.1);
  CHECK(out.opened.size() == 2);
  CHECK_FALSE(out.took_outside_option);
  CHECK(out.best_explored == 1);
  CHECK(out.utility == out.must_choose_utility);
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto t = random_search(seed, 5, 0.2);
    CHECK_FALSE(t.out.took_outside_option);
    CHECK(t.out.utility == t.out.must_choose_utility);
  }
}

TEST_CASE("step cap") {
  auto low = [](ItemId) { return ItemDraw{-1.0, -1.0}; };
  CHECK_THROWS_AS(run_search({}, 0.902, low, low, 0.1, 50), StepCapExceeded);
  CHECK_THROWS_AS(run_search({}, 0.0, low, low, 0.1, 50), DomainError);
}

TEST_CASE("transcript invariants") {
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    const double cost = 0.05 + 0.3 * static_cast<double>(seed % 7) / 7.0;
    const Transcript t = random_search(seed, static_cast<int>(seed % 12), cost);
    const auto& out = t.out;
    REQUIRE(!out.opened.empty());
    // Index order is nonincreasing.
    for (std::size_t i = 1; i < t.indices.size(); ++i) CHECK(t.indices[i] <= t.indices[i - 1]);
    // Every opening after the first was warranted.
    double best = -INFINITY;
    for (std::size_t i = 0; i < out.opened.size(); ++i) {
      if (i > 0) CHECK(best < t.indices[i]);
      best = std::max(best, out.observed_values[i]);
    }
    // Utility decomposition, bit for bit.
    CHECK(out.utility == std::max(0.0, best) - cost * static_cast<double>(out.opened.size()));
    CHECK(out.utility + cost * static_cast<double>(out.opened.size()) ==
          doctest::Approx(std::max(0.0, best)).epsilon(1e-14));
    std::set<ItemId> distinct(out.opened.begin(), out.opened.end());
    CHECK(distinct.size() == out.opened.size());
  }
}

TEST_CASE("ties go to the smaller id, fresh items last") {
  std::vector<ValueBelief> beliefs{PointBelief{1.0}, PointBelief{1.0}};
  auto explored = [](ItemId) { return ItemDraw{1.0, 0.0}; };
  auto fresh = [](ItemId) { return ItemDraw{5.0, 5.0}; };
  // Both explored indices equal the fresh index 0.9; both come first.
  const auto out = run_search(beliefs, 0.9, fresh, explored, 0.1);
  REQUIRE(out.opened.size() == 3);
  CHECK(out.opened[0] == 0);
  CHECK(out.opened[1] == 1);
  CHECK(out.was_fresh[2]);
}

TEST_CASE("replay is deterministic") {
  const Transcript a = random_search(42, 9, 0.1);
  const Transcript b = random_search(42, 9, 0.1);
  CHECK(a.out.opened == b.out.opened);
  CHECK(a.out.observed_values == b.out.observed_values);
  CHECK(a.out.utility == b.out.utility);
}

TEST_CASE("single-agent expected utility equals the reservation value") {
  for (double cost : {0.1, 0.2}) {
    const double x = standard_reservation(cost);
    SequentialRng rng(static_cast<std::uint64_t>(cost * 1000));
    RunningStats stats;
    auto fresh = [&](ItemId) {
      const double v = rng.normal();
      return ItemDraw{v, v};
    };
    for (int i = 0; i < 100'000; ++i) {
      stats.add(run_search({}, x, fresh, fresh, cost).utility);
    }
    CHECK(std::abs(stats.mean() - x) <= 3.0 * stats.standard_error());
  }
}
