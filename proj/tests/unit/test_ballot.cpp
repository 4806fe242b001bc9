#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "brwss/ballot.hpp"
#include "brwss/errors.hpp"
#include "brwss/simulator.hpp"
#include "oracles.hpp"

using namespace brwss;

TEST_CASE("exact ballot values") {
  CHECK(ballot_exact({0, 1.0, 1.0}) == 1.0);
  CHECK(ballot_exact({1, 1.0, 1.0}) == doctest::Approx(1.0));
  CHECK(ballot_exact({2, 1.0, 1.0}) == doctest::Approx(0.75).epsilon(1e-14));
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{0.5, 1.5}, std::pair{1.5, 0.3}, std::pair{0.2, 0.2}})
    for (int n : {1, 2})
      CHECK(ballot_exact({n, a, b}) == doctest::Approx(oracle::ballot_brute(n, a, b)).epsilon(3e-3));
  CHECK_THROWS_AS(ballot_exact({-1, 1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(ballot_exact({3, 0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(ballot_exact({kBallotExactMaxN + 1, 1.0, 1.0}), DomainError);
}

TEST_CASE("exact ballot monotonicity") {
  double previous = 1.0;
  for (int n = 1; n <= 300; ++n) {
    const double q = ballot_exact({n, 1.0, 1.0});
    CHECK(q >= 0.0);
    CHECK(q <= previous + 1e-12);
    previous = q;
  }
  for (int n : {5, 40}) {
    CHECK(ballot_exact({n, 1.0, 2.0}) >= ballot_exact({n, 1.0, 1.0}));
    CHECK(ballot_exact({n, 2.0, 1.0}) >= ballot_exact({n, 1.0, 1.0}));
  }
}

TEST_CASE("monte carlo agrees with the exact recursion") {
  Rng rng(7);
  for (int n : {1, 2, 5, 10, 50})
    for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
      const auto mc = ballot_mc({n, a, b}, 200000, rng);
      const double exact = ballot_exact({n, a, b});
      CHECK(std::fabs(mc.estimate - exact) <= 4.0 * std::max(mc.std_err, 1e-6));
    }
}

TEST_CASE("barrier check reproduces the ballot probability") {
  Rng rng(8);
  const int m = 20, n = 200000;
  int survived = 0;
  std::vector<double> times(m);
  for (int i = 0; i < n; ++i) {
    for (double& t : times) t = uniform01(rng);
    std::sort(times.begin(), times.end());
    survived += survived_barrier(times, m, 1.0);
  }
  const double p = survived / double(n);
  CHECK(std::fabs(p - ballot_exact({m, 1.0, 1.0})) <= 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("smirnov report") {
  Rng rng(9);
  const auto one = smirnov_scaling_report({1.0}, {1}, 1000, rng, 10);
  CHECK(one.at(0).exact == doctest::Approx(1.0));
  CHECK(one.at(0).normalized == doctest::Approx(1.0));
  CHECK_THROWS_AS(smirnov_scaling_report({2.0}, {3}, 10, rng), DomainError);
  CHECK_THROWS_AS(smirnov_scaling_report({0.5}, {3}, 10, rng), DomainError);

  const auto cells = smirnov_scaling_report({1.0, 2.0}, {25, 100, 400}, 20000, rng, 400);
  REQUIRE(cells.size() == 6);
  CHECK(cells[0].lambda == 1.0);
  CHECK(cells[3].lambda == 2.0);
  for (int i = 0; i < 2; ++i) CHECK(*cells[i].exact > *cells[i + 1].exact);
  // (lambda, n) against (2 lambda, 4 n)
  CHECK(cells[4].normalized == doctest::Approx(cells[0].normalized).epsilon(0.25));
  CHECK(cells[5].normalized == doctest::Approx(cells[1].normalized).epsilon(0.25));
}
