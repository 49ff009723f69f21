#include <cmath>

#include "doctest.h"
#include "pandora/bounds.hpp"
#include "pandora/errors.hpp"

using namespace pandora;

TEST_CASE("report directions") {
  const auto up = upper_report("u", 2.0, 2.5, 0.4);
  CHECK_FALSE(up.satisfied);
  CHECK(up.slack == doctest::Approx(-0.1));
  CHECK(upper_report("u", 2.0, 2.3, 0.4).satisfied);
  const auto low = lower_report("l", 2.0, 1.5, 0.6);
  CHECK(low.satisfied);
  CHECK(low.slack == doctest::Approx(0.1));
  CHECK_FALSE(lower_report("l", 2.0, 1.0, 0.6).satisfied);
}

TEST_CASE("plateau bound") {
  // 50-digit references
  CHECK(std::abs(plateau_bound(0.1) - 3.6635182955347218) <= 1e-14);
  CHECK(std::abs(plateau_bound(0.2) - 3.1751590353900425) <= 1e-14);
  CHECK(plateau_bound(std::nextafter(kInvSqrt2Pi, 0.0)) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK_THROWS_AS(plateau_bound(0.5), DomainError);
  CHECK_THROWS_AS(plateau_bound(0.0), DomainError);
}

TEST_CASE("intermediate-diversity shape") {
  CHECK(prop_inter_estimate(0.3, 1.0) == 0.0);
  CHECK(std::abs(prop_inter_estimate(0.5, 1e4) - 1.3386778122376732) <= 1e-14);
  // Grows with T, doubly logarithmically.
  CHECK(prop_inter_estimate(0.5, 1e6) > prop_inter_estimate(0.5, 1e4));
  // The high-to-low diversity ratio falls toward sqrt(1 - 0.75^2) / sqrt(1 - 0.25^2).
  const double limit = std::sqrt(1 - 0.5625) / std::sqrt(1 - 0.0625);
  double prev = INFINITY;
  for (double T : {1e2, 1e10, 1e50, 1e300}) {
    const double ratio = prop_inter_estimate(0.75, T) / prop_inter_estimate(0.25, T);
    CHECK(ratio > limit);
    CHECK(ratio < prev);
    prev = ratio;
  }
  CHECK_THROWS_AS(prop_inter_estimate(1.0, 10.0), DomainError);
  CHECK_THROWS_AS(prop_inter_estimate(0.5, 0.5), DomainError);
}

TEST_CASE("diamond bounds") {
  const DiamondParams d{0.002, 100.0};
  const auto b = diamond_bounds(d, 1.0, 0.3, 5000);
  // Exhaustive maximization reference
  CHECK(std::abs(b.lower_for_sigma1 - 69.171371008816) <= 1e-9);
  CHECK(b.best_round == 1088);
  CHECK(std::abs(b.fresh_index - 0.89159723285510136) <= 1e-10);
  CHECK(std::abs(b.upper_for_sigma0 - 2.0915972328551014) <= 1e-10);
  CHECK(std::isinf(b.upper_for_intermediate));
  // The lower bound approaches D as T grows.
  CHECK(diamond_bounds(d, 1.0, 0.3, 1'000'000).lower_for_sigma1 > 0.9 * 100.0);

  double prev = 0.0;
  for (double sigma : {0.2, 0.5, 0.8, 0.95, 0.99}) {
    const double u = diamond_bounds(d, sigma, 0.3, 5000).upper_for_intermediate;
    CHECK(u > prev);
    prev = u;
  }
  CHECK_THROWS_AS(diamond_bounds(d, 1.0, 0.1, 100), DomainError);
}

TEST_CASE("coupled dominating process") {
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    const auto tr = coupled_upper_process(0.5, 0.1, 1000, 17, rep);
    REQUIRE(tr.actual.size() == 1000);
    for (std::size_t t = 0; t < tr.actual.size(); ++t) {
      REQUIRE(tr.actual[t] <= tr.dominating[t]);
      if (t > 0) CHECK(tr.dominating[t] >= tr.dominating[t - 1]);
    }
  }
  const auto a = coupled_upper_process(0.3, 0.2, 200, 5, 1);
  const auto b = coupled_upper_process(0.3, 0.2, 200, 5, 1);
  CHECK(a.actual == b.actual);
  CHECK(a.dominating == b.dominating);
  // At low diversity the coin almost always succeeds, so I' settles early.
  const auto low = coupled_upper_process(0.1, 0.1, 500, 3, 0);
  CHECK(low.dominating[499] == low.dominating[49]);
  CHECK_THROWS_AS(coupled_upper_process(1.0, 0.1, 10, 1), DomainError);
}

TEST_CASE("prefix-average tail") {
  CHECK(prefix_average_tail(0.0, 100, 10'000, 1).probability == 0.0);
  const auto e = prefix_average_tail(1.0, 100, 20'000, 8);
  CHECK(e.probability <= 0.25 + 4.0 * e.standard_error);
  CHECK(e.probability > 0.0);
  double prev = 0.0;
  for (std::int64_t T : {1, 2, 5, 20, 100, 400}) {
    const double p = prefix_average_tail(0.7, T, 10'000, 8).probability;
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("truncated maximum") {
  const auto one = truncated_max_bound(0.8, 0.5, 1, 20'000, 2);
  CHECK(std::abs(one.mean_max - truncated_mean_above(0.0, 0.64, 0.5)) <= 4.0 * one.standard_error);
  const auto e = truncated_max_bound(1.0, 0.0, 100, 10'000, 3);
  CHECK(e.bound == doctest::Approx(std::sqrt(2.0 * std::log(200.0))));
  CHECK(e.mean_max <= e.bound + 4.0 * e.standard_error);
  CHECK(truncated_max_bound(1.0, 0.0, 1000, 10, 3).bound > e.bound);
}

TEST_CASE("curve checks pick the applicable bounds") {
  WorldConfig cfg;
  cfg.cost = 0.1;
  cfg.sigma = 0.0;
  std::vector<CurvePoint> pts{{0.0, 10, 1.2, 0.01, 1.2, 1.0, 0.01, 5.0, 100},
                              {0.0, 20, 3.7, 0.001, 3.7, 1.0, 0.01, 5.0, 100}};
  auto r = check_curve_bounds(cfg, pts);
  REQUIRE(r.size() == 2);
  CHECK(r[0].satisfied);
  CHECK_FALSE(r[1].satisfied);
  CHECK(r[0].name == "plateau[sigma=0,T=10]");

  cfg.sigma = 0.5;
  for (auto& p : pts) p.sigma = 0.5;
  r = check_curve_bounds(cfg, pts);
  // shape + upper at both points, lower only where a half-horizon point exists
  CHECK(r.size() == 5);
  CHECK(r.back().name == "sandwich_lower[sigma=0.5,T=20]");

  cfg.sigma = 1.0;
  CHECK(check_curve_bounds(cfg, pts).empty());

  WorldConfig none = cfg, full = cfg;
  none.sigma = 0.0;
  std::vector<CurvePoint> a{{0.0, 10, 1.5, 0.01, 1.5, 1.0, 0.0, 3.0, 10}};
  std::vector<CurvePoint> b{{1.0, 10, 0.9, 0.01, 0.9, 0.0, 0.0, 30.0, 10}};
  const auto ord = check_ordering_bounds({none, full}, {a, b});
  REQUIRE(ord.size() == 1);
  CHECK(ord[0].satisfied);
}
