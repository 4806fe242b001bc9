#pragma once

// Slow, independent reference computations for the test suites. Nothing here
// calls into the library under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracle {

inline std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

inline std::vector<int> digits(std::uint64_t code, int b, int d) {
  std::vector<int> out(d);
  for (int i = 0; i < d; ++i) {
    out[i] = static_cast<int>(code % b);
    code /= b;
  }
  return out;
}

inline int weight(std::uint64_t code, int b, int d) {
  int w = 0;
  for (int x : digits(code, b, d)) w += x != 0;
  return w;
}

// P(walker at `from` is at `to` at time t) for the unit-rate walk on the full
// b^d-state cube, by uniformization of the explicit generator: every state
// jumps at rate 1 to one of its d(b-1) neighbours.
inline double walk_transition(int b, int d, std::uint64_t from, std::uint64_t to, double t) {
  if (t == 0.0) return from == to ? 1.0 : 0.0;
  const std::uint64_t states = ipow(b, d);
  std::vector<double> v(states, 0.0), next(states);
  v[from] = 1.0;
  const double neighbour_weight = 1.0 / (d * (b - 1));
  const int steps = static_cast<int>(t + 40.0 * std::sqrt(t + 1.0) + 80.0);
  double total = 0.0;
  for (int k = 0; k <= steps; ++k) {
    const double poisson = std::exp(-t + k * std::log(t) - std::lgamma(k + 1.0));
    total += poisson * v[to];
    std::fill(next.begin(), next.end(), 0.0);
    for (std::uint64_t s = 0; s < states; ++s) {
      if (v[s] == 0.0) continue;
      std::uint64_t power = 1;
      for (int i = 0; i < d; ++i, power *= b) {
        const int digit = static_cast<int>((s / power) % b);
        for (int c = 0; c < b; ++c)
          if (c != digit) next[s + (c - digit) * static_cast<std::int64_t>(power)] += v[s] * neighbour_weight;
      }
    }
    v.swap(next);
  }
  return total;
}

// Smallest positive root of t log(rho) + log q_m(t) written out directly,
// found by a geometric scan followed by plain bisection.
inline double first_moment_root(int b, double rho, int d, int m) {
  auto f = [&](double t) {
    const double e = std::exp(-b * t / ((b - 1.0) * d));
    return t * std::log(rho) - d * std::log(static_cast<double>(b)) +
           (d - m) * std::log(1.0 + (b - 1) * e) + m * std::log(1.0 - e);
  };
  double lo = 1e-9;
  double hi = lo;
  const double ratio = 1.0005;
  while (f(hi) < 0.0) {
    lo = hi;
    hi *= ratio;
    if (hi > 1e9) throw std::runtime_error("oracle: no root");
  }
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Principal-branch Lambert W by safeguarded Newton in long double.
inline double lambert_w(double x) {
  if (x == 0.0) return 0.0;
  long double lo = 0.0L, hi = std::max(1.0L, std::log1p(static_cast<long double>(x)));
  long double w = 0.5L * (lo + hi);
  for (int i = 0; i < 500; ++i) {
    const long double g = w * std::exp(w) - x;
    (g < 0 ? lo : hi) = w;
    long double next = w - g / (std::exp(w) * (w + 1.0L));
    if (!(next > lo && next < hi)) next = 0.5L * (lo + hi);
    if (std::fabs(next - w) <= 1e-18L * std::max(1.0L, std::fabs(w))) return static_cast<double>(next);
    w = next;
  }
  return static_cast<double>(w);
}

// x0: positive root of x log(rho) + log(1 + (b-1)/b (exp(-b x/(b-1)) - 1)),
// by bisection on (1e-12, 100].
inline double x0(int b, double rho) {
  auto h = [&](double x) {
    return x * std::log(rho) + std::log(1.0 + (b - 1.0) / b * (std::exp(-b * x / (b - 1.0)) - 1.0));
  };
  double lo = 1e-6, hi = 100.0;
  while (h(lo) > 0.0) lo /= 2;
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Asymptotic p-value of the two-sample Kolmogorov-Smirnov statistic.
inline double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double stat = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    stat = std::max(stat, std::fabs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  const double ne = static_cast<double>(a.size()) * b.size() / (a.size() + b.size());
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * stat;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) sum += (k % 2 ? 2.0 : -2.0) * std::exp(-2.0 * k * k * lambda * lambda);
  return std::clamp(sum, 0.0, 1.0);
}

// P(N_t - n t <= a + (b - a) t on [0, 1]) by midpoint integration over the
// unit square, checking the boundary at each jump; n <= 2 only.
inline double ballot_brute(int n, double a, double b_end, int grid = 1500) {
  auto ok = [&](std::vector<double> u) {
    std::sort(u.begin(), u.end());
    for (int i = 1; i <= n; ++i) {
      const double t = u[i - 1];
      if (i - n * t > a + (b_end - a) * t) return false;
    }
    return true;
  };
  if (n == 1) {
    int hits = 0;
    for (int i = 0; i < grid; ++i) hits += ok({(i + 0.5) / grid});
    return static_cast<double>(hits) / grid;
  }
  if (n == 2) {
    long hits = 0;
    for (int i = 0; i < grid; ++i)
      for (int j = 0; j < grid; ++j) hits += ok({(i + 0.5) / grid, (j + 0.5) / grid});
    return static_cast<double>(hits) / (static_cast<double>(grid) * grid);
  }
  throw std::invalid_argument("ballot_brute: n <= 2 only");
}

}  // namespace oracle
