#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "brwss/errors.hpp"
#include "brwss/numerics.hpp"
#include "brwss/simulator.hpp"
#include "oracles.hpp"

using namespace brwss;

namespace {

SimConfig config(int b, int d, double rho, int m, int replicas, std::uint64_t seed) {
  SimConfig cfg;
  cfg.params = ModelParams::from_rho(b, d, rho);
  cfg.m = m;
  cfg.replicas = replicas;
  cfg.master_seed = seed;
  cfg.t_max = 1e3;
  return cfg;
}

struct MeanEstimate {
  double mean = 0.0;
  double std_err = 0.0;
};

template <class F>
MeanEstimate mean_of(int n, std::uint64_t seed, F&& draw) {
  std::vector<double> values(n);
  for_each_replica(seed, n, 0, [&](std::uint64_t i, Rng& rng) { values[i] = draw(rng); });
  double sum = 0.0, sq = 0.0;
  for (double v : values) {
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  return {mean, std::sqrt((sq / n - mean * mean) / (n - 1))};
}

}  // namespace

TEST_CASE("trivial passage times") {
  Rng rng(1);
  auto cfg = config(2, 6, 1.5, 0, 1, 1);
  CHECK(*simulate_fpt_projected(cfg, rng).hit_time == 0.0);
  cfg.mode = SimMode::FullGenotype;
  CHECK(*simulate_fpt_full(cfg, Genotype::origin(6), rng).hit_time == 0.0);
}

TEST_CASE("censoring") {
  Rng rng(2);
  auto cfg = config(2, 30, 1.5, 10, 1, 1);
  cfg.population_cap = 5;
  auto s = simulate_fpt_projected(cfg, rng);
  CHECK(s.censoring == Censoring::PopulationCap);
  CHECK_FALSE(s.hit_time);
  cfg.population_cap = 1000000;
  cfg.t_max = 0.01;
  s = simulate_fpt_projected(cfg, rng);
  CHECK(s.censoring == Censoring::TimeHorizon);

  cfg.replicas = 20;
  const auto stats = run_ensemble(cfg);
  CHECK(stats.censored_count == 20);
  CHECK_FALSE(stats.quantiles);
}

TEST_CASE("config validation") {
  auto cfg = config(2, 6, 1.5, 1, 1, 1);
  cfg.observable = Observable::CoverTime;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.mode = SimMode::FullGenotype;
  cfg.validate();
  cfg.params.d = 27;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = config(2, 6, 1.5, 7, 1, 1);
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = config(2, 6, 1.5, 1, 0, 1);
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = config(3, 40, 1.5, 1, 1, 1);
  cfg.mode = SimMode::FullGenotype;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("projection is exact") {
  for (auto [b, d, m] : {std::tuple{2, 4, 2}, std::tuple{3, 3, 2}, std::tuple{4, 3, 3}}) {
    auto cfg = config(b, d, 1.5, m, 3000, 21);
    const auto projected = run_ensemble(cfg).hit_times();
    cfg.mode = SimMode::FullGenotype;
    cfg.master_seed = 22;
    const auto full = run_ensemble(cfg).hit_times();
    CHECK(oracle::ks_two_sample_pvalue(projected, full) > 0.001);
  }
}

TEST_CASE("exact tail law") {
  auto cfg = config(2, 12, 1.5, 2, 3000, 31);
  const auto pure = run_ensemble(cfg).hit_times();
  cfg.switch_population = 50;
  cfg.master_seed = 32;
  const auto hybrid = run_ensemble(cfg).hit_times();
  CHECK(oracle::ks_two_sample_pvalue(pure, hybrid) > 0.001);

  const SurvivalTable table(cfg.params, 40.0);
  CHECK(table.cumulative_hazard(3, 0.0) == 0.0);
  CHECK(table.cumulative_hazard(1, 5.0) > table.cumulative_hazard(2, 5.0));
  CHECK(table.cumulative_hazard(2, 10.0) > table.cumulative_hazard(2, 5.0));
  CHECK_THROWS_AS(table.cumulative_hazard(13, 1.0), DimensionError);

  // Single particle, vanishing branching: the hazard of the pure walk.
  const auto walk = ModelParams::from_log_rho(2, 3, 1e-12);
  const SurvivalTable pure_walk(walk, 5.0);
  Rng rng(4);
  const int n = 100000;
  int survived = 0;
  for (int i = 0; i < n; ++i) {
    int level = 1;
    double t = 0.0;
    for (;;) {
      t += exponential(rng, 1.0);
      if (t > 2.0) {
        ++survived;
        break;
      }
      if (uniform01(rng) < level / 3.0) {
        if (--level == 0) break;
      } else {
        ++level;
      }
    }
  }
  const double p = survived / double(n);
  CHECK(std::exp(-pure_walk.cumulative_hazard(1, 2.0)) ==
        doctest::Approx(p).epsilon(4.0 * std::sqrt(p * (1 - p) / n) / p));
}

TEST_CASE("first moment and occupation time") {
  auto cfg = config(2, 10, 1.5, 2, 1, 1);
  cfg.t_max = 3.0;
  const auto count = mean_of(100000, 41, [&](Rng& rng) {
    return double(count_particles_at_target(cfg, 3.0, rng).at_target);
  });
  CHECK(std::fabs(count.mean - std::exp(expected_particles_log(cfg.params, 2, 3.0).value)) <=
        3.0 * count.std_err);
  const auto population = mean_of(100000, 42, [&](Rng& rng) {
    return double(count_particles_at_target(cfg, 3.0, rng).population);
  });
  CHECK(std::fabs(population.mean - std::pow(1.5, 3.0)) <= 3.0 * population.std_err);

  cfg = config(2, 8, 1.5, 1, 1, 1);
  cfg.t_max = 5.0;
  const auto occupation = mean_of(100000, 43, [&](Rng& rng) {
    return count_particles_at_target(cfg, 5.0, rng).time_at_target;
  });
  CHECK(std::fabs(occupation.mean - expected_occupation_time(cfg.params, 1, 5.0)) <=
        3.0 * occupation.std_err);

  Rng rng(5);
  CHECK(count_particles_at_target(config(2, 8, 1.5, 3, 1, 1), 0.0, rng).at_target == 0);
  CHECK_THROWS_AS(count_particles_at_target(cfg, 6.0, rng), DomainError);
}

TEST_CASE("cover time of the single-letter cube") {
  auto cfg = config(2, 1, 1.5, 0, 1, 1);
  cfg.mode = SimMode::FullGenotype;
  cfg.observable = Observable::CoverTime;
  const double l1 = std::log(1.5);
  const auto mean = mean_of(100000, 51, [&](Rng& rng) { return *simulate_cover_time(cfg, rng).hit_time; });
  CHECK(std::fabs(mean.mean - std::log1p(l1) / l1) <= 3.0 * mean.std_err);
}

TEST_CASE("ensembles are deterministic") {
  const auto cfg = config(2, 10, 1.5, 2, 64, 9);
  const auto a = run_ensemble(cfg, 1);
  const auto b = run_ensemble(cfg, 3);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].hit_time == b.samples[i].hit_time);
    CHECK(a.samples[i].events_processed == b.samples[i].events_processed);
  }
  CHECK(a.quantiles->median == b.quantiles->median);
  CHECK(a.rng_name == std::string(kRngName));

  auto single = cfg;
  single.replicas = 1;
  Rng rng(replica_seed(cfg.master_seed, 0));
  CHECK(run_ensemble(single).samples[0].hit_time == simulate_fpt_projected(single, rng).hit_time);
}

TEST_CASE("more branching means earlier passage") {
  double previous = INFINITY;
  for (double rho : {1.2, 1.5, 2.0, 2.5}) {
    const auto stats = run_ensemble(config(2, 10, rho, 1, 2000, 61));
    CHECK(stats.quantiles->median < previous);
    previous = stats.quantiles->median;
  }
}

TEST_CASE("quantiles") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK(quantile(v, 0.5) == 3.0);
  CHECK(quantile(v, 0.1) == doctest::Approx(1.4));
  CHECK_THROWS_AS(quantile(std::vector<double>{}, 0.5), DomainError);
  CHECK_THROWS_AS(quantile(v, 1.5), DomainError);
}

TEST_CASE("barrier survival") {
  CHECK(survived_barrier({}, 2, 1.0));
  CHECK_FALSE(survived_barrier(std::vector<double>{0.01, 0.02}, 2, 1.0));
  CHECK(survived_barrier(std::vector<double>{0.5, 1.0}, 2, 1.0));
  CHECK_THROWS_AS(survived_barrier(std::vector<double>{0.5, 0.2}, 2, 1.0), DomainError);
}
