#include "brwss/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "brwss/errors.hpp"

namespace brwss {

namespace {

// Particle counts per distance level with O(log d) sampling of a level
// proportionally to its count (Fenwick tree).
class LevelCounts {
 public:
  explicit LevelCounts(int levels)
      : counts_(levels, 0),
        tree_(levels + 1, 0),
        top_bit_(std::bit_floor(static_cast<unsigned>(levels))) {}

  void add(int level, std::int64_t delta) {
    counts_[level] += delta;
    total_ += delta;
    for (auto i = static_cast<std::size_t>(level) + 1; i < tree_.size(); i += i & (~i + 1))
      tree_[i] += delta;
  }

  // Level holding the particle of rank r in [0, total).
  int find(std::uint64_t r) const {
    std::size_t position = 0;
    for (std::size_t step = top_bit_; step != 0; step >>= 1) {
      const std::size_t next = position + step;
      if (next < tree_.size() && tree_[next] <= r) {
        position = next;
        r -= tree_[next];
      }
    }
    return static_cast<int>(position);
  }

  std::uint64_t count(int level) const { return counts_[level]; }
  std::uint64_t total() const { return total_; }
  std::span<const std::uint64_t> all() const { return counts_; }

 private:
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> tree_;
  std::size_t top_bit_;
  std::uint64_t total_ = 0;
};

// Cumulative per-particle event thresholds at each level, in the order
// branch, down, lateral, up. Their sum is lambda1 + lambda2 at every level.
struct LevelThresholds {
  std::vector<double> branch_down;          // lambda1 + down
  std::vector<double> branch_down_lateral;  // lambda1 + down + lateral
  double lambda1 = 0.0;
  double total = 0.0;

  explicit LevelThresholds(const ModelParams& p)
      : branch_down(p.d + 1), branch_down_lateral(p.d + 1) {
    lambda1 = p.lambda1;
    total = p.lambda1 + p.lambda2;
    for (int k = 0; k <= p.d; ++k) {
      const ProjectedRates r = projected_rates(p, k);
      branch_down[k] = p.lambda1 + r.down;
      branch_down_lateral[k] = p.lambda1 + r.down + r.lateral;
    }
  }
};

// Genotypes packed as base-b integers.
class GenotypeCodec {
 public:
  explicit GenotypeCodec(const ModelParams& p) : b_(p.b), d_(p.d), powers_(p.d) {
    std::uint64_t power = 1;
    for (int i = 0; i < p.d; ++i) {
      powers_[i] = power;
      if (power > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(p.b))
        throw ConfigError("full-genotype mode requires b^d <= 2^62");
      power *= p.b;
    }
    states_ = power;
  }

  std::uint64_t states() const { return states_; }

  std::uint64_t encode(const Genotype& g) const {
    std::uint64_t code = 0;
    for (int i = 0; i < d_; ++i) code += g[i] * powers_[i];
    return code;
  }

  std::uint64_t mutate(std::uint64_t code, Rng& rng) const {
    const auto i = uniform_index(rng, static_cast<std::uint64_t>(d_));
    const std::uint64_t digit = (code / powers_[i]) % b_;
    const std::uint64_t shifted = (digit + 1 + uniform_index(rng, b_ - 1)) % b_;
    return code - digit * powers_[i] + shifted * powers_[i];
  }

 private:
  std::uint64_t b_;
  int d_;
  std::vector<std::uint64_t> powers_;
  std::uint64_t states_ = 1;
};

FptSample censored(Censoring reason, std::uint64_t events, std::uint64_t peak) {
  return FptSample{std::nullopt, events, peak, reason};
}

FptSample hit(double t, std::uint64_t events, std::uint64_t peak) {
  return FptSample{t, events, peak, Censoring::None};
}

}  // namespace

std::string to_string(SimMode mode) {
  return mode == SimMode::Projected ? "projected" : "full";
}

std::string to_string(Observable observable) {
  return observable == Observable::FirstPassage ? "first-passage" : "cover";
}

std::string to_string(Censoring censoring) {
  switch (censoring) {
    case Censoring::None: return "none";
    case Censoring::TimeHorizon: return "time-horizon";
    case Censoring::PopulationCap: return "population-cap";
  }
  return "unknown";
}

void SimConfig::validate() const {
  params.validate();
  if (m < 0 || m > params.d) throw ConfigError("start distance m outside [0, d]");
  if (!(t_max > 0.0)) throw ConfigError("t_max must be > 0");
  if (population_cap < 1) throw ConfigError("population_cap must be >= 1");
  if (replicas < 1) throw ConfigError("replicas must be >= 1");
  if (observable == Observable::CoverTime) {
    if (mode != SimMode::FullGenotype) throw ConfigError("cover times need full-genotype mode");
    const double states = std::pow(static_cast<double>(params.b), params.d);
    if (states > static_cast<double>(kMaxCoverStates))
      throw ConfigError("cover times need b^d <= 2^26");
  }
  if (mode == SimMode::FullGenotype &&
      params.d * std::log2(static_cast<double>(params.b)) > 62.0)
    throw ConfigError("full-genotype mode requires b^d <= 2^62");
}

FptSample simulate_fpt_projected(const SimConfig& cfg, Rng& rng, const SurvivalTable* tail) {
  const ModelParams& p = cfg.params;
  if (cfg.m == 0) return hit(0.0, 0, 1);

  if (tail && (tail->d() != p.d || tail->horizon() < cfg.t_max))
    throw ConfigError("survival table does not match the configuration");
  const std::uint64_t switch_at = tail ? std::max<std::uint64_t>(cfg.switch_population, 1) : 0;

  const LevelThresholds thresholds(p);
  LevelCounts counts(p.d + 1);
  counts.add(cfg.m, 1);
  std::uint64_t events = 0;
  std::uint64_t peak = 1;
  double t = 0.0;
  for (;;) {
    const std::uint64_t n = counts.total();
    t += exponential(rng, static_cast<double>(n) * thresholds.total);
    if (t > cfg.t_max) return censored(Censoring::TimeHorizon, events, peak);
    const int k = counts.find(uniform_index(rng, n));
    const double u = uniform01(rng) * thresholds.total;
    ++events;
    if (u < thresholds.lambda1) {
      if (n + 1 > cfg.population_cap) return censored(Censoring::PopulationCap, events, peak);
      counts.add(k, 1);
      peak = std::max(peak, n + 1);
      if (switch_at != 0 && n + 1 >= switch_at) {
        const auto rest = tail->sample_remaining(counts.all(), cfg.t_max - t, rng);
        if (!rest) return censored(Censoring::TimeHorizon, events, peak);
        return hit(t + *rest, events, peak);
      }
    } else if (u < thresholds.branch_down[k]) {
      if (k == 1) return hit(t, events, peak);
      counts.add(k, -1);
      counts.add(k - 1, 1);
    } else if (u >= thresholds.branch_down_lateral[k]) {
      counts.add(k, -1);
      counts.add(k + 1, 1);
    }
  }
}

FptSample simulate_fpt_full(const SimConfig& cfg, const Genotype& target, Rng& rng) {
  const ModelParams& p = cfg.params;
  target.validate(p);
  const GenotypeCodec codec(p);
  const std::uint64_t goal = codec.encode(target);
  if (cfg.m == 0) return hit(0.0, 0, 1);

  std::vector<std::uint64_t> particles{codec.encode(Genotype::at_distance(target, p.b, cfg.m))};
  const double total_rate = p.lambda1 + p.lambda2;
  const double branch_probability = p.lambda1 / total_rate;
  std::uint64_t events = 0;
  double t = 0.0;
  for (;;) {
    const std::uint64_t n = particles.size();
    t += exponential(rng, static_cast<double>(n) * total_rate);
    if (t > cfg.t_max) return censored(Censoring::TimeHorizon, events, n);
    const auto i = uniform_index(rng, n);
    ++events;
    if (uniform01(rng) < branch_probability) {
      if (n + 1 > cfg.population_cap) return censored(Censoring::PopulationCap, events, n);
      particles.push_back(particles[i]);
    } else {
      particles[i] = codec.mutate(particles[i], rng);
      if (particles[i] == goal) return hit(t, events, n);
    }
  }
}

TargetCount count_particles_at_target(const SimConfig& cfg, double t_end, Rng& rng) {
  const ModelParams& p = cfg.params;
  if (!(t_end >= 0.0) || t_end > cfg.t_max)
    throw DomainError("count_particles_at_target: t must lie in [0, t_max]");
  const double total_rate = p.lambda1 + p.lambda2;
  TargetCount out;

  if (cfg.mode == SimMode::Projected) {
    const LevelThresholds thresholds(p);
    LevelCounts counts(p.d + 1);
    counts.add(cfg.m, 1);
    double t = 0.0;
    for (;;) {
      const std::uint64_t n = counts.total();
      const double next = t + exponential(rng, static_cast<double>(n) * total_rate);
      out.time_at_target += static_cast<double>(counts.count(0)) * (std::min(next, t_end) - t);
      if (next > t_end) break;
      t = next;
      const int k = counts.find(uniform_index(rng, n));
      const double u = uniform01(rng) * total_rate;
      if (u < thresholds.lambda1) {
        if (n + 1 > cfg.population_cap) {
          out.capped = true;
          break;
        }
        counts.add(k, 1);
      } else if (u < thresholds.branch_down[k]) {
        counts.add(k, -1);
        counts.add(k - 1, 1);
      } else if (u >= thresholds.branch_down_lateral[k]) {
        counts.add(k, -1);
        counts.add(k + 1, 1);
      }
    }
    out.at_target = counts.count(0);
    out.population = counts.total();
    return out;
  }

  const GenotypeCodec codec(p);
  const Genotype origin = Genotype::origin(p.d);
  std::vector<std::uint64_t> particles{codec.encode(Genotype::at_distance(origin, p.b, cfg.m))};
  std::uint64_t at_origin = cfg.m == 0 ? 1 : 0;
  const double branch_probability = p.lambda1 / total_rate;
  double t = 0.0;
  for (;;) {
    const std::uint64_t n = particles.size();
    const double next = t + exponential(rng, static_cast<double>(n) * total_rate);
    out.time_at_target += static_cast<double>(at_origin) * (std::min(next, t_end) - t);
    if (next > t_end) break;
    t = next;
    const auto i = uniform_index(rng, n);
    if (uniform01(rng) < branch_probability) {
      if (n + 1 > cfg.population_cap) {
        out.capped = true;
        break;
      }
      particles.push_back(particles[i]);
      at_origin += particles[i] == 0;
    } else {
      at_origin -= particles[i] == 0;
      particles[i] = codec.mutate(particles[i], rng);
      at_origin += particles[i] == 0;
    }
  }
  out.at_target = at_origin;
  out.population = particles.size();
  return out;
}

FptSample simulate_cover_time(const SimConfig& cfg, Rng& rng) {
  const ModelParams& p = cfg.params;
  const GenotypeCodec codec(p);
  const std::uint64_t states = codec.states();
  if (states > kMaxCoverStates) throw ConfigError("cover times need b^d <= 2^26");

  std::vector<std::uint64_t> visited((states + 63) / 64, 0);
  auto visit = [&](std::uint64_t code) {
    std::uint64_t& word = visited[code >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (code & 63);
    const bool fresh = (word & bit) == 0;
    word |= bit;
    return fresh;
  };

  std::vector<std::uint64_t> particles{0};
  visit(0);
  std::uint64_t seen = 1;
  if (seen == states) return hit(0.0, 0, 1);

  const double total_rate = p.lambda1 + p.lambda2;
  const double branch_probability = p.lambda1 / total_rate;
  std::uint64_t events = 0;
  double t = 0.0;
  for (;;) {
    const std::uint64_t n = particles.size();
    t += exponential(rng, static_cast<double>(n) * total_rate);
    if (t > cfg.t_max) return censored(Censoring::TimeHorizon, events, n);
    const auto i = uniform_index(rng, n);
    ++events;
    if (uniform01(rng) < branch_probability) {
      if (n + 1 > cfg.population_cap) return censored(Censoring::PopulationCap, events, n);
      particles.push_back(particles[i]);
    } else {
      particles[i] = codec.mutate(particles[i], rng);
      if (visit(particles[i]) && ++seen == states) return hit(t, events, n);
    }
  }
}

bool survived_barrier(std::span<const double> mutation_times, int m, double t) {
  if (!std::is_sorted(mutation_times.begin(), mutation_times.end()))
    throw DomainError("survived_barrier: mutation times must be sorted");
  if (!(t > 0.0)) throw DomainError("survived_barrier: t must be > 0");
  for (std::size_t i = 0; i < mutation_times.size(); ++i) {
    const double s = mutation_times[i];
    if (s < 0.0 || s > t) throw DomainError("survived_barrier: time outside [0, t]");
    // After the i-th jump (0-based) the count is at least i + 1.
    if (static_cast<double>(i) > s * m / t) return false;
  }
  return true;
}

}  // namespace brwss
