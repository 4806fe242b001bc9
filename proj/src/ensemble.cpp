#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>

#include "brwss/errors.hpp"
#include "brwss/simulator.hpp"

namespace brwss {

std::vector<double> EnsembleStats::hit_times() const {
  std::vector<double> times;
  times.reserve(samples.size());
  for (const auto& s : samples)
    if (s.hit_time) times.push_back(*s.hit_time);
  return times;
}

double quantile(std::span<const double> sorted, double probability) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  if (!(probability >= 0.0 && probability <= 1.0)) throw DomainError("quantile level outside [0, 1]");
  const double position = probability * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(position);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double fraction = position - static_cast<double>(lo);
  return sorted[lo] + fraction * (sorted[hi] - sorted[lo]);
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("BRWSS_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<unsigned>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

EnsembleStats run_ensemble(const SimConfig& cfg, unsigned threads) {
  cfg.validate();
  EnsembleStats stats;
  stats.master_seed = cfg.master_seed;
  stats.rng_name = std::string(kRngName);
  stats.seed_rule = std::string(kSeedRule);
  stats.samples.resize(cfg.replicas);

  const Genotype origin = Genotype::origin(cfg.params.d);
  std::optional<SurvivalTable> tail;
  if (cfg.switch_population > 0 && cfg.mode == SimMode::Projected &&
      cfg.observable == Observable::FirstPassage)
    tail.emplace(cfg.params, cfg.t_max);
  for_each_replica(cfg.master_seed, static_cast<std::uint64_t>(cfg.replicas), threads,
                   [&](std::uint64_t i, Rng& rng) {
                     FptSample sample;
                     if (cfg.observable == Observable::CoverTime)
                       sample = simulate_cover_time(cfg, rng);
                     else if (cfg.mode == SimMode::Projected)
                       sample = simulate_fpt_projected(cfg, rng, tail ? &*tail : nullptr);
                     else
                       sample = simulate_fpt_full(cfg, origin, rng);
                     stats.samples[i] = sample;
                   });

  for (const auto& s : stats.samples) stats.censored_count += s.censored();
  std::vector<double> times = stats.hit_times();
  if (!times.empty() && 2 * stats.censored_count <= stats.samples.size()) {
    std::sort(times.begin(), times.end());
    stats.quantiles = Quantiles{quantile(times, 0.10), quantile(times, 0.25),
                                quantile(times, 0.50), quantile(times, 0.75),
                                quantile(times, 0.90)};
  }
  return stats;
}

}  // namespace brwss
