#include <CLI11.hpp>

#include <fstream>
#include <set>

#include "brwss/errors.hpp"
#include "brwss/random.hpp"
#include "commands.hpp"

#ifndef BRWSS_VERSION
#define BRWSS_VERSION "0.0.0"
#endif

namespace brwss::cli {

namespace {

void add_model_flags(CLI::App* sub, ModelOptions& o) {
  sub->add_option("--b", o.b, "Alphabet size")->capture_default_str();
  sub->add_option("--d", o.d, "Sequence length")->required();
  sub->add_option("--rho", o.rho, "Rescaled growth rate exp(lambda1/lambda2)");
  sub->add_option("--lambda1", o.lambda1, "Branching rate");
  sub->add_option("--lambda2", o.lambda2, "Mutation rate (default 1)");
  sub->add_flag("--raw-time", o.raw_time, "Report times in the units of lambda2");
}

// Lines of a --config file become flags placed ahead of the command line, so
// anything given explicitly still wins. Keys match long flag names without
// the dashes; "#" starts a comment; "key=true" sets a boolean flag.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  std::set<std::string> given;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (a.rfind("--config=", 0) == 0) path = a.substr(9);
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos
                                                                                         : a.find('=') - 2));
  }
  if (path.empty() || args.empty()) return args;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::vector<std::string> extra;
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw ConfigError("config line without '=': " + line);
      continue;
    }
    auto key = CLI::detail::trim_copy(line.substr(0, eq));
    auto value = CLI::detail::trim_copy(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (key.empty() || given.count(key)) continue;
    if (value == "true") {
      extra.push_back("--" + key);
    } else if (value != "false") {
      extra.push_back("--" + key);
      extra.push_back(value);
    }
  }
  std::vector<std::string> out{args.front()};
  out.insert(out.end(), extra.begin(), extra.end());
  out.insert(out.end(), args.begin() + 1, args.end());
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Branching random walk on the b-ary hypercube: passage-time predictions and simulation",
               "brwss"};
  app.set_version_flag("--version", BRWSS_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  PredictOptions predict;
  auto* p = app.add_subcommand("predict", "Regime predictions for the first-passage time");
  add_model_flags(p, predict.model);
  p->add_option("--rho-range", predict.model.rho_range, "Sweep rho as lo:hi[:step] (step 0.1)");
  p->add_option("--m", predict.m, "Target distance");
  p->add_option("--m-range", predict.m_range, "Target distances lo:hi[:step]");
  p->add_option("--regime", predict.regime)->check(CLI::IsMember({"auto", "slow", "fast", "ultraslow"}))
      ->capture_default_str();
  p->add_option("--format", predict.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  p->add_option("--out", predict.out, "Output file (default stdout)");
  p->add_option("--config", config_path, "key=value defaults file");

  SimulateOptions simulate;
  auto* s = app.add_subcommand("simulate", "Monte Carlo ensemble of passage or cover times");
  add_model_flags(s, simulate.model);
  s->add_option("--m", simulate.m)->capture_default_str();
  s->add_option("--replicas", simulate.replicas)->capture_default_str();
  s->add_option("--seed", simulate.seed)->capture_default_str();
  s->add_option("--t-max-mult", simulate.t_max_mult, "Horizon as a multiple of the prediction")
      ->capture_default_str();
  s->add_option("--t-max", simulate.t_max, "Absolute horizon");
  s->add_option("--pop-cap", simulate.pop_cap)->capture_default_str();
  s->add_option("--switch-pop", simulate.switch_pop,
                "Population at which the exact tail law takes over (0 = off)")
      ->capture_default_str();
  s->add_option("--mode", simulate.mode)->check(CLI::IsMember({"projected", "full"}))
      ->capture_default_str();
  s->add_flag("--cover", simulate.cover, "Simulate the cover time");
  s->add_option("--out", simulate.out, "Output directory")->capture_default_str();
  s->add_option("--config", config_path, "key=value defaults file");

  BallotOptions ballot;
  auto* b = app.add_subcommand("ballot", "Ballot probabilities for the uniform empirical process");
  b->add_option("--n-grid", ballot.n_grid, "Comma separated sample sizes")->capture_default_str();
  b->add_option("--lambda-grid", ballot.lambda_grid, "Comma separated barrier heights")
      ->capture_default_str();
  b->add_option("--replicas", ballot.replicas)->capture_default_str();
  b->add_option("--exact-max-n", ballot.exact_max_n)->capture_default_str();
  b->add_option("--seed", ballot.seed)->capture_default_str();
  b->add_option("--out", ballot.out, "Output file (default stdout)");
  b->add_option("--config", config_path, "key=value defaults file");

  FiguresOptions figures;
  auto* f = app.add_subcommand("figures", "Write the CSV bundle used by the plot scripts");
  f->add_option("--out", figures.out, "Output directory")->required();
  f->add_option("--fig2-d", figures.fig2_d)->capture_default_str();
  f->add_option("--fig2-m", figures.fig2_m)->capture_default_str();
  f->add_option("--config", config_path, "key=value defaults file");

  try {
    const auto expanded = expand_config(args);
    app.parse(std::vector<std::string>(expanded.rbegin(), expanded.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  RunManifest manifest;
  manifest.tool_version = BRWSS_VERSION;
  manifest.rng_name = std::string(kRngName);
  manifest.started_at = utc_timestamp();

  try {
    if (p->parsed()) {
      manifest.subcommand = "predict";
      return cmd_predict(predict, manifest, out, err);
    }
    if (s->parsed()) {
      manifest.subcommand = "simulate";
      return cmd_simulate(simulate, manifest, out, err);
    }
    if (b->parsed()) {
      manifest.subcommand = "ballot";
      return cmd_ballot(ballot, manifest, out, err);
    }
    manifest.subcommand = "figures";
    return cmd_figures(figures, manifest, out, err);
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: malformed number (" << e.what() << ")\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericError;
  }
}

}  // namespace brwss::cli
