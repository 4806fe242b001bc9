#pragma once

// Event-driven Monte Carlo for the branching random walk on the b-ary
// hypercube. Every particle carries two exponential clocks: branching
// (rate lambda1, the copy starts at the parent's position) and mutation
// (rate lambda2, one uniformly chosen coordinate takes a new symbol).
//
// Times are in the units of the rates stored in SimConfig::params.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brwss/hypercube.hpp"
#include "brwss/random.hpp"

namespace brwss {

enum class SimMode {
  Projected,     // particles tracked by their distance to the target only
  FullGenotype,  // every particle carries its genotype
};

enum class Observable {
  FirstPassage,  // first time a particle sits on the target
  CoverTime,     // first time every vertex has been visited (full mode)
};

enum class Censoring { None, TimeHorizon, PopulationCap };

std::string to_string(SimMode mode);
std::string to_string(Observable observable);
std::string to_string(Censoring censoring);

// Largest b^d for which the cover-time visited set is allocated.
inline constexpr std::uint64_t kMaxCoverStates = std::uint64_t{1} << 26;

struct SimConfig {
  ModelParams params;
  int m = 1;  // distance of the starting genotype from the target
  double t_max = 1e3;
  std::uint64_t population_cap = 10'000'000;
  std::uint64_t master_seed = 0;
  int replicas = 1;
  SimMode mode = SimMode::Projected;
  Observable observable = Observable::FirstPassage;
  // Projected first passage only: once the population reaches this size the
  // remaining passage time is drawn from its exact conditional law (see
  // SurvivalTable). 0 keeps the whole run event by event.
  std::uint64_t switch_population = 0;

  // Throws ConfigError (or DomainError for model parameters).
  void validate() const;
};

struct FptSample {
  std::optional<double> hit_time;  // absent iff censored
  std::uint64_t events_processed = 0;
  std::uint64_t peak_population = 0;
  Censoring censoring = Censoring::None;

  bool censored() const { return censoring != Censoring::None; }
};

// Exact survival law of the passage time for one particle. With
// u_k(s) = P(no descendant of a particle at distance k reaches the target
// within s), the table stores H_k(s) = -log u_k(s) on a uniform grid, solved
// from the backward equation
//   w_k' = lambda1 w_k (1 - w_k) + down_k (w_{k-1} - w_k) + up_k (w_{k+1} - w_k),
// w = 1 - u, w_0 = 1, and interpolates with cubic Hermite splines.
class SurvivalTable {
 public:
  SurvivalTable(const ModelParams& p, double horizon, double step = 0.01);

  double horizon() const { return horizon_; }
  int d() const { return d_; }
  double cumulative_hazard(int k, double s) const;

  // Given counts[k] particles at distance k and no hit so far, draws the
  // remaining passage time; empty when it exceeds `limit` (<= horizon).
  std::optional<double> sample_remaining(std::span<const std::uint64_t> counts, double limit,
                                         Rng& rng) const;

 private:
  double total_hazard(std::span<const std::uint64_t> counts, std::size_t cell, double s) const;

  int d_ = 0;
  double horizon_ = 0.0;
  double step_ = 0.0;
  std::size_t points_ = 0;
  std::vector<double> hazard_;      // [point * (d + 1) + k]
  std::vector<double> derivative_;  // same layout
};

FptSample simulate_fpt_projected(const SimConfig& cfg, Rng& rng,
                                 const SurvivalTable* tail = nullptr);

// Starts at Genotype::at_distance(target, b, m).
FptSample simulate_fpt_full(const SimConfig& cfg, const Genotype& target, Rng& rng);

// State of one replica run to a fixed time without absorption.
struct TargetCount {
  std::uint64_t at_target = 0;     // N_0(t)
  std::uint64_t population = 0;    // #V_t
  double time_at_target = 0.0;     // integral of N_0 over [0, t]
  bool capped = false;             // population cap hit; discard the sample
};

// Target is state 0 (projected) or the origin (full genotype); the walk
// starts at distance cfg.m.
TargetCount count_particles_at_target(const SimConfig& cfg, double t, Rng& rng);

// Full genotype mode only, starting from the origin; b^d <= kMaxCoverStates.
FptSample simulate_cover_time(const SimConfig& cfg, Rng& rng);

struct Quantiles {
  double q10 = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double q90 = 0.0;
};

struct EnsembleStats {
  std::vector<FptSample> samples;  // indexed by replica
  std::optional<Quantiles> quantiles;
  std::uint64_t censored_count = 0;
  std::uint64_t master_seed = 0;
  std::string rng_name;
  std::string seed_rule;

  std::vector<double> hit_times() const;  // uncensored, in replica order
};

// Linear interpolation between order statistics (the usual "type 7" rule).
double quantile(std::span<const double> sorted, double probability);

// Worker count: BRWSS_THREADS when set to a positive integer, otherwise the
// hardware concurrency.
unsigned default_thread_count();

// Replica i runs on Rng(replica_seed(master_seed, i)); the result does not
// depend on the number of threads. threads == 0 means default_thread_count().
EnsembleStats run_ensemble(const SimConfig& cfg, unsigned threads = 0);

// Runs `count` independent jobs job(i, rng) with the ensemble seeding rule.
// Used for observables other than the passage/cover time.
template <class Job>
void for_each_replica(std::uint64_t master_seed, std::uint64_t count, unsigned threads, Job&& job);

// True iff N_s <= s m / t + 1 for every s in [0, t], where N_s counts the
// mutation times <= s. Times must be sorted and lie in [0, t].
bool survived_barrier(std::span<const double> mutation_times, int m, double t);

}  // namespace brwss

#include "brwss/detail/parallel.hpp"
