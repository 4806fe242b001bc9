#pragma once

// Linear-boundary non-crossing probabilities for the uniform empirical
// process: with N_t the number of n iid U[0,1] samples <= t,
//
//   q_n(a, b) = P(N_t - n t <= a + (b - a) t for all t in [0, 1]),  q_0 = 1.

#include <cstdint>
#include <optional>
#include <vector>

#include "brwss/random.hpp"

namespace brwss {

struct BallotQuery {
  int n = 0;
  double a = 1.0;
  double b_end = 1.0;

  void validate() const;  // DomainError on n < 0 or non-positive a, b_end
};

inline constexpr int kBallotExactMaxN = 4096;

// Exact value via the order-statistics recursion, O(n^2). DomainError for
// n > kBallotExactMaxN (use ballot_mc).
double ballot_exact(const BallotQuery& q);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_err = 0.0;
};

MonteCarloEstimate ballot_mc(const BallotQuery& q, std::int64_t replicas, Rng& rng);

struct SmirnovCell {
  double lambda = 1.0;
  int n = 1;
  MonteCarloEstimate mc;
  std::optional<double> exact;
  double normalized = 0.0;  // (n / lambda^2) * P(sup_t (N_t - n t) < lambda)
};

// One cell per (lambda, n) pair, lambda-major. Every pair must satisfy
// 1 <= lambda <= sqrt(n). Exact values are filled in for n <= exact_max_n
// and used for the normalized column; otherwise the Monte Carlo estimate is.
std::vector<SmirnovCell> smirnov_scaling_report(const std::vector<double>& lambda_grid,
                                                const std::vector<int>& n_grid,
                                                std::int64_t replicas, Rng& rng,
                                                int exact_max_n = 0);

}  // namespace brwss
