#pragma once

// Exact combinatorics and transition probabilities of the simple random walk
// on the b-ary hypercube {0, ..., b-1}^d, plus the branching/mutation model
// parameters shared by every other module.
//
// Time convention: unless stated otherwise, times are in rescaled units where
// the per-particle mutation rate is 1 and the branching rate is log(rho).

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "brwss/random.hpp"

namespace brwss {

using BigInt = boost::multiprecision::cpp_int;

struct ModelParams {
  int b = 2;
  int d = 1;
  double lambda1 = 1.0;  // branching rate
  double lambda2 = 1.0;  // mutation rate

  // Throws DomainError unless b >= 2, d >= 1 and both rates are positive.
  void validate() const;

  double log_rho() const { return lambda1 / lambda2; }
  double rho() const;

  // Same process with time measured in units of 1/lambda2.
  ModelParams rescaled() const;

  static ModelParams from_rho(int b, int d, double rho);
  static ModelParams from_log_rho(int b, int d, double log_rho);
};

// Natural logarithm of a probability or expectation; -inf encodes exact zero.
struct LogProb {
  double value = -std::numeric_limits<double>::infinity();

  double linear() const;
  bool is_zero() const { return value == -std::numeric_limits<double>::infinity(); }
};

class Genotype {
 public:
  Genotype() = default;
  explicit Genotype(std::vector<std::uint32_t> symbols) : symbols_(std::move(symbols)) {}

  static Genotype origin(int d) { return Genotype(std::vector<std::uint32_t>(d, 0)); }

  // Genotype at Hamming distance m from `target`: the first m symbols are
  // shifted by one (mod b).
  static Genotype at_distance(const Genotype& target, int b, int m);

  int size() const { return static_cast<int>(symbols_.size()); }
  std::uint32_t operator[](int i) const { return symbols_[i]; }
  std::span<const std::uint32_t> symbols() const { return symbols_; }

  // Throws DomainError if the length is not p.d or a symbol is >= p.b.
  void validate(const ModelParams& p) const;

  friend bool operator==(const Genotype&, const Genotype&) = default;

 private:
  friend Genotype mutate(const Genotype&, const ModelParams&, Rng&);
  std::vector<std::uint32_t> symbols_;
};

int hamming_distance(const Genotype& x, const Genotype& y);

BigInt binomial(int n, int k);  // zero unless 0 <= k <= n
double log_binomial(double n, double k);

// Number of vertices at Hamming distance m from a fixed vertex.
BigInt sphere_size(int d, int b, int m);
double log_sphere_size(int d, int b, int m);

// log q_m(t): probability that a single walker started at distance m from a
// vertex sits on that vertex at (rescaled) time t. Depends on p only
// through b and d.
LogProb transition_log_prob(const ModelParams& p, int m, double t);

// log E[N_0(t)] = t log(rho) + log q_m(t), rescaled time.
LogProb expected_particles_log(const ModelParams& p, int m, double t);

// Integral of E[N_0(s)] over [0, t], rescaled time.
double expected_occupation_time(const ModelParams& p, int m, double t);

// Rates, in p's own time units, at which a single particle at distance k from
// the target moves one step closer, stays at distance k (b >= 3 only), or
// moves one step away.
struct ProjectedRates {
  double down = 0.0;
  double lateral = 0.0;
  double up = 0.0;
};

ProjectedRates projected_rates(const ModelParams& p, int k);

// One mutation: a uniformly chosen coordinate takes a uniformly chosen
// different symbol.
Genotype mutate(const Genotype& g, const ModelParams& p, Rng& rng);

// Number of y at weight ell_prime with d_H(x, y) = ell, where x has weight m.
BigInt count_at_distance_pair(int d, int b, int m, int ell, int ell_prime);

// Binary cube only. Number of triples (x1, x2, x3), x2 of weight k and x3 of
// weight k_prime, with d_H(x0, x1) = ell1, d_H(x1, x2) = ell2 and
// d_H(x1, x3) = ell3, for a fixed x0 of weight m.
BigInt count_triples(int d, int m, int ell1, int ell2, int ell3, int k, int k_prime);

}  // namespace brwss
