#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pandora/errors.hpp"
#include "pandora/reservation.hpp"

using namespace pandora;

TEST_CASE("standard reservation values") {
  // 50-digit references
  CHECK(std::abs(standard_reservation(0.1) - 0.90234634751003452) <= 1e-12);
  CHECK(std::abs(standard_reservation(0.2) - 0.49288732720681849) <= 1e-12);
  CHECK(std::abs(standard_reservation(0.3) - 0.21651349769209774) <= 1e-12);
  CHECK(std::abs(standard_reservation(kInvSqrt2Pi)) <= 1e-14);
  // Against bisection on the quadrature call value.
  for (double c : {0.01, 0.1, 0.2, 0.35}) {
    CHECK(std::abs(standard_reservation(c) - oracle::reservation_by_quadrature(0.0, 1.0, c)) <=
          1e-9);
  }
  // Extreme costs still converge.
  CHECK(standard_reservation(1e-12) > 6.0);
  CHECK(standard_reservation(50.0) < -49.0);
}

TEST_CASE("point and gaussian beliefs") {
  CHECK(reservation_value(PointBelief{5.0}, 0.1) == 5.0 - 0.1);
  CHECK(reservation_value(GaussianBelief{{3.0, 0.0}}, 0.25) == 2.75);
  CHECK(reservation_value(GaussianBelief{{0.0, 1.0}}, kInvSqrt2Pi) == doctest::Approx(0.0));
  CHECK_THROWS_AS(reservation_value(PointBelief{1.0}, 0.0), DomainError);
  CHECK_THROWS_AS(reservation_value(GaussianBelief{{0.0, 1.0}}, -1.0), DomainError);

  SUBCASE("affine identity") {
    for (double mu : {-1.0, 0.0, 2.5}) {
      for (double s : {0.2, 1.0, 1.7}) {
        for (double c : {0.05, 0.1, 0.3}) {
          const double direct = reservation_value(GaussianBelief{{mu, s * s}}, c);
          const double via = mu + s * standard_reservation(c / s);
          CHECK(std::abs(direct - via) <= 1e-9);
        }
      }
    }
  }

  SUBCASE("excess over the mean is at most the standard index") {
    for (double v : {0.01, 0.25, 0.5, 0.99, 1.0}) {
      for (double c : {0.05, 0.1, 0.2}) {
        const double x = reservation_value(GaussianBelief{{0.7, v}}, c);
        CHECK(x - 0.7 <= standard_reservation(c) + 1e-12);
      }
    }
  }

  SUBCASE("monotone in mean and cost") {
    double prev = -INFINITY;
    for (double mu = -3.0; mu <= 3.0; mu += 0.25) {
      const double x = reservation_value(GaussianBelief{{mu, 0.5}}, 0.1);
      CHECK(x >= prev);
      prev = x;
    }
    prev = INFINITY;
    for (double c = 0.01; c < 0.4; c += 0.01) {
      const double x = reservation_value(GaussianBelief{{0.0, 1.0}}, c);
      CHECK(x <= prev);
      prev = x;
    }
  }
}

TEST_CASE("diamond mixture beliefs") {
  const GaussianSpec base{0.0, 1.0};
  SUBCASE("zero weight reduces to the base gaussian") {
    for (double c : {0.1, 0.2, 0.3}) {
      const double x = reservation_value(DiamondMixtureBelief{0.0, 100.0, base}, c);
      CHECK(std::abs(x - standard_reservation(c)) <= 1e-9);
    }
  }
  SUBCASE("full weight is the shifted gaussian") {
    const double x = reservation_value(DiamondMixtureBelief{1.0, 100.0, base}, 0.2);
    CHECK(std::abs(x - (100.0 + standard_reservation(0.2))) <= 1e-9);
  }
  SUBCASE("monotone in theta") {
    double prev = -INFINITY;
    for (int i = 0; i <= 50; ++i) {
      const double theta = i / 50.0;
      const double x = reservation_value(DiamondMixtureBelief{theta, 10.0, base}, 0.3);
      CHECK(x >= prev);
      prev = x;
    }
  }
  SUBCASE("residual against quadrature") {
    const DiamondMixtureBelief b{0.002, 100.0, base};
    const double x = reservation_value(b, 0.3);
    CHECK(std::abs(oracle::mixture_call_by_quadrature(0.002, 100.0, 0.0, 1.0, x) - 0.3) <= 1e-10);
    CHECK(std::abs(expected_excess(b, x) - 0.3) <= 1e-12);
  }
  CHECK_THROWS_AS(validate_belief(DiamondMixtureBelief{1.5, 1.0, base}), DomainError);
  CHECK_THROWS_AS(validate_belief(DiamondMixtureBelief{0.5, 0.0, base}), DomainError);
}

TEST_CASE("solver residual on random beliefs") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const double mu = -3.0 + 6.0 * u(gen);
    const double s = 0.05 + 2.0 * u(gen);
    const double c = 0.005 + 0.5 * u(gen);
    if (i % 2 == 0) {
      const double x = reservation_value(GaussianBelief{{mu, s * s}}, c);
      CHECK(std::abs(oracle::call_by_quadrature(mu, s, x) - c) <= 1e-10);
    } else {
      const double theta = u(gen);
      const double jump = 0.5 + 99.5 * u(gen);
      const double x = reservation_value(DiamondMixtureBelief{theta, jump, {mu, s * s}}, c);
      CHECK(std::abs(oracle::mixture_call_by_quadrature(theta, jump, mu, s, x) - c) <= 1e-10);
    }
  }
}

TEST_CASE("fresh item index") {
  for (double sigma : {0.0, 0.3, 1.0}) {
    CHECK(fresh_item_index(sigma, 0.1, std::nullopt) == standard_reservation(0.1));
  }
  const double x = fresh_item_index(1.0, 0.3, DiamondParams{0.002, 100.0});
  CHECK(std::abs(x - 0.89159723285510136) <= 1e-10);
  CHECK_THROWS_AS(fresh_item_index(0.5, 0.4, std::nullopt), DomainError);
  CHECK_THROWS_AS(fresh_item_index(0.5, 0.0, std::nullopt), DomainError);
  CHECK_THROWS_AS(fresh_item_index(1.2, 0.1, std::nullopt), DomainError);
  // Diamond world requires c >= p D.
  CHECK_THROWS_AS(fresh_item_index(1.0, 0.1, DiamondParams{0.002, 100.0}), DomainError);
}
