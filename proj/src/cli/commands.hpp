#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "brwss/cli.hpp"

namespace brwss::cli {

struct ModelOptions {
  int b = 2;
  int d = 0;
  std::optional<double> rho;
  std::string rho_range;  // lo:hi[:step]
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  bool raw_time = false;
};

struct PredictOptions {
  ModelOptions model;
  std::optional<int> m;
  std::string m_range;  // lo:hi[:step]
  std::string regime = "auto";
  std::string format = "csv";
  std::string out;
};

struct SimulateOptions {
  ModelOptions model;
  int m = 1;
  int replicas = 1000;
  std::uint64_t seed = 1;
  double t_max_mult = 4.0;
  std::optional<double> t_max;
  std::uint64_t pop_cap = 10'000'000;
  std::uint64_t switch_pop = 0;
  std::string mode = "projected";
  bool cover = false;
  std::string out = ".";
};

struct BallotOptions {
  std::string n_grid = "10,100,1000";
  std::string lambda_grid = "1";
  std::int64_t replicas = 100000;
  int exact_max_n = 1000;
  std::uint64_t seed = 1;
  std::string out;
};

struct FiguresOptions {
  std::string out;
  int fig2_d = 1000;
  int fig2_m = 1;
};

int cmd_predict(const PredictOptions& options, RunManifest& manifest, std::ostream& out,
                std::ostream& err);
int cmd_simulate(const SimulateOptions& options, RunManifest& manifest, std::ostream& out,
                 std::ostream& err);
int cmd_ballot(const BallotOptions& options, RunManifest& manifest, std::ostream& out,
               std::ostream& err);
int cmd_figures(const FiguresOptions& options, RunManifest& manifest, std::ostream& out,
                std::ostream& err);

}  // namespace brwss::cli
