#include "brwss/ballot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "brwss/errors.hpp"

namespace brwss {

namespace {

// The supremum of N_t - n t - (a + (b - a) t) is attained at the jumps of
// N_t, so the event is U_(i) >= c_i for i = 1..n with c_i = (i - a) / slope,
// slope = n + b - a. A non-positive slope makes the event certain.
double slope_of(const BallotQuery& q) { return q.n + q.b_end - q.a; }

}  // namespace

void BallotQuery::validate() const {
  if (n < 0) throw DomainError("ballot: n must be >= 0");
  if (!(a > 0.0)) throw DomainError("ballot: intercept a must be > 0");
  if (!(b_end > 0.0)) throw DomainError("ballot: endpoint b must be > 0");
}

double ballot_exact(const BallotQuery& q) {
  q.validate();
  if (q.n > kBallotExactMaxN) {
    std::ostringstream msg;
    msg << "ballot_exact: n=" << q.n << " exceeds " << kBallotExactMaxN << "; use ballot_mc";
    throw DomainError(msg.str());
  }
  const int n = q.n;
  const double slope = slope_of(q);
  if (n == 0 || slope <= 0.0) return 1.0;

  const double last = (n - q.a) / slope;
  if (last >= 1.0) return 0.0;

  // Forward over the constraint points t_l = c_l > 0. S[k] is the
  // probability that k iid uniforms on [0, t_l] satisfy every constraint up
  // to t_l, i.e. fewer than i of them lie below c_i. Moving from t_prev to
  // t_l, the number of the k points that fall in (t_prev, t_l] is
  // Binomial(k, (t_l - t_prev) / t_l), so every update is a mixture of
  // probabilities.
  std::vector<double> log_factorial(n + 1, 0.0);
  for (int i = 1; i <= n; ++i) log_factorial[i] = log_factorial[i - 1] + std::log(i);
  auto mix = [&](const std::vector<double>& from, int k, double p) {
    if (p >= 1.0) return from[0];
    const double log_p = std::log(p), log_q = std::log1p(-p);
    const double mean = k * p;
    double total = 0.0;
    for (int m = 0; m <= k; ++m) {
      const double w = std::exp(log_factorial[k] - log_factorial[m] - log_factorial[k - m] +
                                m * log_p + (k - m) * log_q);
      total += w * from[k - m];
      if (m > mean + 10.0 && w < 1e-25) break;
    }
    return total;
  };

  std::vector<double> s(n + 1, 0.0), next(n + 1, 0.0);
  s[0] = 1.0;
  double t_prev = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double c = (i - q.a) / slope;
    if (c <= 0.0) continue;
    const double p = (c - t_prev) / c;
    std::fill(next.begin(), next.end(), 0.0);
    for (int k = 0; k < i; ++k) next[k] = mix(s, k, p);
    s.swap(next);
    t_prev = c;
  }
  if (t_prev == 0.0) return 1.0;
  return std::clamp(mix(s, n, 1.0 - t_prev), 0.0, 1.0);
}

MonteCarloEstimate ballot_mc(const BallotQuery& q, std::int64_t replicas, Rng& rng) {
  q.validate();
  if (replicas < 1) throw DomainError("ballot_mc: replicas must be >= 1");
  const int n = q.n;
  const double slope = slope_of(q);
  if (n == 0 || slope <= 0.0) return {1.0, 0.0};

  // A sample U lies below c_i exactly for i >= floor(U slope + a) + 1; bucket
  // the samples by that first index and check the running counts.
  std::vector<std::uint32_t> first_index(n + 2);
  std::int64_t survived = 0;
  for (std::int64_t rep = 0; rep < replicas; ++rep) {
    std::fill(first_index.begin(), first_index.end(), 0);
    for (int s = 0; s < n; ++s) {
      const double position = std::floor(uniform01(rng) * slope + q.a) + 1.0;
      const int g = position < 1.0 ? 1 : (position > n + 1.0 ? n + 1 : static_cast<int>(position));
      ++first_index[g];
    }
    bool ok = true;
    std::uint32_t below = 0;
    for (int i = 1; i <= n && ok; ++i) {
      below += first_index[i];
      ok = below <= static_cast<std::uint32_t>(i - 1);
    }
    survived += ok;
  }
  const double p = static_cast<double>(survived) / static_cast<double>(replicas);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(replicas))};
}

std::vector<SmirnovCell> smirnov_scaling_report(const std::vector<double>& lambda_grid,
                                                const std::vector<int>& n_grid,
                                                std::int64_t replicas, Rng& rng,
                                                int exact_max_n) {
  for (double lambda : lambda_grid)
    for (int n : n_grid)
      if (!(lambda >= 1.0) || lambda > std::sqrt(static_cast<double>(n))) {
        std::ostringstream msg;
        msg << "smirnov_scaling_report: need 1 <= lambda <= sqrt(n), got lambda=" << lambda
            << ", n=" << n;
        throw DomainError(msg.str());
      }

  std::vector<SmirnovCell> cells;
  for (double lambda : lambda_grid) {
    for (int n : n_grid) {
      SmirnovCell cell;
      cell.lambda = lambda;
      cell.n = n;
      const BallotQuery query{n, lambda, lambda};
      cell.mc = ballot_mc(query, replicas, rng);
      if (n <= std::min(exact_max_n, kBallotExactMaxN)) cell.exact = ballot_exact(query);
      const double p = cell.exact.value_or(cell.mc.estimate);
      cell.normalized = n / (lambda * lambda) * p;
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace brwss
