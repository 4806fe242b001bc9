#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "brwss/ballot.hpp"
#include "brwss/errors.hpp"
#include "brwss/numerics.hpp"
#include "brwss/simulator.hpp"

namespace brwss::cli {

namespace {


struct ResolvedModel {
  ModelParams params;       // rescaled: lambda2 = 1
  double time_factor = 1.0;  // multiply rescaled times by this for output
};

std::vector<double> parse_real_range(const std::string& text, double default_step) {
  std::vector<double> parts;
  std::stringstream stream(text);
  std::string piece;
  while (std::getline(stream, piece, ':')) parts.push_back(std::stod(piece));
  if (parts.size() < 2 || parts.size() > 3) throw ConfigError("range must be lo:hi[:step]");
  const double step = parts.size() == 3 ? parts[2] : default_step;
  if (!(step > 0.0) || parts[1] < parts[0]) throw ConfigError("range needs lo <= hi and step > 0");
  std::vector<double> values;
  const auto count = static_cast<long>(std::floor((parts[1] - parts[0]) / step + 1e-9));
  for (long i = 0; i <= count; ++i) values.push_back(parts[0] + static_cast<double>(i) * step);
  return values;
}

std::vector<int> parse_int_range(const std::string& text) {
  std::vector<int> values;
  for (double v : parse_real_range(text, 1.0)) values.push_back(static_cast<int>(std::lround(v)));
  return values;
}

template <class T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> values;
  std::stringstream stream(text);
  std::string piece;
  while (std::getline(stream, piece, ',')) {
    if (piece.empty()) continue;
    if constexpr (std::is_integral_v<T>)
      values.push_back(static_cast<T>(std::stoll(piece)));
    else
      values.push_back(static_cast<T>(std::stod(piece)));
  }
  if (values.empty()) throw ConfigError("empty list '" + text + "'");
  return values;
}

// One resolved model per rho value (a single one unless --rho-range is set).
std::vector<ResolvedModel> resolve_models(const ModelOptions& o) {
  if (o.d < 1) throw ConfigError("--d must be >= 1");
  const int sources = (o.rho ? 1 : 0) + (!o.rho_range.empty() ? 1 : 0) + (o.lambda1 ? 1 : 0);
  if (sources != 1) throw ConfigError("give exactly one of --rho, --rho-range, --lambda1");

  std::vector<ResolvedModel> models;
  if (o.lambda1) {
    const double lambda2 = o.lambda2.value_or(1.0);
    ModelParams raw{o.b, o.d, *o.lambda1, lambda2};
    raw.validate();
    models.push_back({raw.rescaled(), o.raw_time ? 1.0 / lambda2 : 1.0});
    return models;
  }
  if (o.lambda2) throw ConfigError("--lambda2 only combines with --lambda1");
  const std::vector<double> rhos = o.rho ? std::vector<double>{*o.rho}
                                         : parse_real_range(o.rho_range, 0.1);
  for (double rho : rhos) {
    if (!(rho > 1.0)) throw ConfigError("rho must be > 1");
    models.push_back({ModelParams::from_rho(o.b, o.d, rho), 1.0});
  }
  return models;
}

void record_model(const ModelOptions& o, RunManifest& manifest) {
  manifest.config["b"] = std::to_string(o.b);
  manifest.config["d"] = std::to_string(o.d);
  if (o.rho) manifest.config["rho"] = format_number(*o.rho);
  if (!o.rho_range.empty()) manifest.config["rho-range"] = o.rho_range;
  if (o.lambda1) manifest.config["lambda1"] = format_number(*o.lambda1);
  if (o.lambda2) manifest.config["lambda2"] = format_number(*o.lambda2);
  manifest.config["raw-time"] = o.raw_time ? "true" : "false";
  manifest.config["time-units"] = o.raw_time ? "raw" : "rescaled";
}

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

std::string join_warnings(const std::vector<std::string>& warnings) {
  std::string joined;
  for (const auto& w : warnings) {
    if (!joined.empty()) joined += ';';
    joined += w;
  }
  for (char& c : joined)
    if (c == ',') c = ' ';
  return joined;
}

Regime choose_regime(const std::string& requested, const ModelParams& p) {
  if (requested == "auto") return classify_regime(p);
  const double L = p.log_rho();
  if (requested == "slow") {
    if (!(L < 1.0)) throw RegimeError("--regime slow needs rho < e");
    return Regime::SlowConstantRho;
  }
  if (requested == "fast") {
    if (!(L > 1.0)) throw RegimeError("--regime fast needs rho > e");
    return Regime::FastConstantRho;
  }
  if (requested == "ultraslow") {
    if (p.b != 2) throw RegimeError("--regime ultraslow needs b = 2");
    if (!(L < 1.0)) throw RegimeError("--regime ultraslow needs rho < e");
    return Regime::UltraSlow;
  }
  throw ConfigError("unknown regime '" + requested + "'");
}

struct PredictRow {
  int b = 0;
  int d = 0;
  int m = 0;
  double rho = 0.0;
  Regime regime = Regime::SlowConstantRho;
  std::optional<double> t_root;
  double t_predicted = 0.0;
  double term_leading = 0.0;
  double term_m = 0.0;
  double term_correction = 0.0;
  std::vector<std::string> warnings;
};

PredictRow predict_row(const ResolvedModel& model, int m, Regime regime) {
  const ModelParams& p = model.params;
  PredictRow row;
  row.b = p.b;
  row.d = p.d;
  row.m = m;
  row.rho = p.rho();
  row.regime = regime;
  const double scale = model.time_factor;

  if (m == 0) {
    row.warnings.push_back("m=0: passage time is 0 by convention");
    if (regime != Regime::FastConstantRho) row.t_root = solve_first_moment(p, 0).t * scale;
    return row;
  }

  FptPrediction prediction;
  switch (regime) {
    case Regime::SlowConstantRho: prediction = predict_slow(p, m); break;
    case Regime::FastConstantRho: prediction = predict_fast(p, m); break;
    case Regime::UltraSlow: {
      const double L = p.log_rho();
      prediction = predict_ultraslow([L](int) { return L; }, p.d, m);
      break;
    }
  }
  if (prediction.t_first_moment) row.t_root = *prediction.t_first_moment * scale;
  row.t_predicted = prediction.t_predicted * scale;
  const auto& terms = prediction.decomposition;
  row.term_leading = terms.at(0).second * scale;
  if (terms.size() > 1) row.term_m = terms.at(1).second * scale;
  if (terms.size() > 2) row.term_correction = terms.at(2).second * scale;
  row.warnings = prediction.warnings;
  return row;
}

std::vector<std::string> to_fields(const PredictRow& row) {
  return {std::to_string(row.b),        std::to_string(row.d),
          std::to_string(row.m),        format_number(row.rho),
          to_string(row.regime),        optional_number(row.t_root),
          format_number(row.t_predicted), format_number(row.term_leading),
          format_number(row.term_m),    format_number(row.term_correction),
          join_warnings(row.warnings)};
}

nlohmann::ordered_json to_json(const PredictRow& row) {
  nlohmann::ordered_json j;
  j["b"] = row.b;
  j["d"] = row.d;
  j["m"] = row.m;
  j["rho"] = row.rho;
  j["regime"] = to_string(row.regime);
  j["t_root"] = row.t_root ? nlohmann::ordered_json(*row.t_root) : nlohmann::ordered_json();
  j["t_predicted"] = row.t_predicted;
  j["term_leading"] = row.term_leading;
  j["term_m"] = row.term_m;
  j["term_correction"] = row.term_correction;
  j["warnings"] = row.warnings;
  return j;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot write " + path);
  return file;
}

void write_manifest_file(const std::string& path, RunManifest& manifest) {
  manifest.finished_at = utc_timestamp();
  auto file = open_output(path);
  file << manifest.to_json() << '\n';
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw ConfigError("cannot create directory " + dir);
  const auto probe = std::filesystem::path(dir) / ".brwss-write-probe";
  {
    std::ofstream test(probe);
    if (!test) throw ConfigError("directory " + dir + " is not writable");
  }
  std::filesystem::remove(probe, ec);
}

// Horizon for simulate: a multiple of the regime prediction (rescaled time).
double default_horizon(const ModelParams& p, int m, bool cover) {
  const int target = cover ? p.d : std::max(m, 1);
  const double L = p.log_rho();
  if (L < 1.0) {
    const RegimeConstants k = regime_constants_from_log_rho(p.b, L);
    return k.x0 * p.d + k.r * target;
  }
  if (L > 1.0) return std::max(1.0, predict_fast(p, target).t_predicted);
  throw RegimeError("rho = e: pass --t-max explicitly");
}

}  // namespace

int cmd_predict(const PredictOptions& o, RunManifest& manifest, std::ostream& out,
                std::ostream& err) {
  record_model(o.model, manifest);
  manifest.config["regime"] = o.regime;
  manifest.config["format"] = o.format;
  if (o.format != "csv" && o.format != "json") throw ConfigError("--format must be csv or json");
  if (o.m.has_value() == !o.m_range.empty()) throw ConfigError("give exactly one of --m, --m-range");
  const std::vector<int> ms = o.m ? std::vector<int>{*o.m} : parse_int_range(o.m_range);
  if (o.m) manifest.config["m"] = std::to_string(*o.m);
  else manifest.config["m-range"] = o.m_range;

  std::vector<PredictRow> rows;
  for (const ResolvedModel& model : resolve_models(o.model)) {
    const Regime regime = choose_regime(o.regime, model.params);
    for (int m : ms) {
      if (m < 0 || m > model.params.d) throw ConfigError("m outside [0, d]");
      rows.push_back(predict_row(model, m, regime));
      for (const auto& w : rows.back().warnings)
        if (w.rfind("m=0", 0) != 0) manifest.hypotheses_warnings.push_back(w);
    }
  }

  std::ostringstream body;
  if (o.format == "csv") {
    CsvTable table{kPredictColumns, {}};
    for (const auto& row : rows) table.rows.push_back(to_fields(row));
    write_csv(body, table);
  } else {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& row : rows) j.push_back(to_json(row));
    body << j.dump(2) << '\n';
  }

  if (o.out.empty()) {
    out << body.str();
  } else {
    open_output(o.out) << body.str();
    write_manifest_file(o.out + ".manifest.json", manifest);
    err << "wrote " << o.out << '\n';
  }
  return kSuccess;
}

int cmd_simulate(const SimulateOptions& o, RunManifest& manifest, std::ostream& out,
                 std::ostream& err) {
  record_model(o.model, manifest);
  if (!o.model.rho_range.empty()) throw ConfigError("simulate takes a single rho");
  const ResolvedModel model = resolve_models(o.model).front();

  SimConfig cfg;
  cfg.params = model.params;
  cfg.m = o.m;
  cfg.replicas = o.replicas;
  cfg.master_seed = o.seed;
  cfg.population_cap = o.pop_cap;
  cfg.switch_population = o.switch_pop;
  if (o.mode == "projected") cfg.mode = SimMode::Projected;
  else if (o.mode == "full") cfg.mode = SimMode::FullGenotype;
  else throw ConfigError("--mode must be projected or full");
  if (o.cover) cfg.observable = Observable::CoverTime;
  cfg.t_max = o.t_max ? *o.t_max / model.time_factor
                      : o.t_max_mult * default_horizon(cfg.params, cfg.m, o.cover);
  cfg.validate();

  manifest.master_seed = o.seed;
  manifest.config["m"] = std::to_string(o.m);
  manifest.config["replicas"] = std::to_string(o.replicas);
  manifest.config["seed"] = std::to_string(o.seed);
  manifest.config["t-max"] = format_number(cfg.t_max * model.time_factor);
  manifest.config["pop-cap"] = std::to_string(o.pop_cap);
  manifest.config["switch-pop"] = std::to_string(o.switch_pop);
  manifest.config["mode"] = o.mode;
  manifest.config["cover"] = o.cover ? "true" : "false";
  manifest.config["seed-rule"] = std::string(kSeedRule);

  ensure_directory(o.out);
  const EnsembleStats stats = run_ensemble(cfg);

  CsvTable samples{kSamplesColumns, {}};
  for (std::size_t i = 0; i < stats.samples.size(); ++i) {
    const FptSample& s = stats.samples[i];
    samples.rows.push_back({std::to_string(i),
                            s.hit_time ? format_number(*s.hit_time * model.time_factor) : "",
                            to_string(s.censoring), std::to_string(s.events_processed),
                            std::to_string(s.peak_population)});
  }
  const std::string samples_path = (std::filesystem::path(o.out) / "samples.csv").string();
  {
    auto file = open_output(samples_path);
    write_csv(file, samples);
  }

  nlohmann::ordered_json j;
  j["replicas"] = o.replicas;
  j["censored_count"] = stats.censored_count;
  if (stats.quantiles) {
    const double f = model.time_factor;
    j["quantiles"] = {{"q10", stats.quantiles->q10 * f},
                      {"q25", stats.quantiles->q25 * f},
                      {"median", stats.quantiles->median * f},
                      {"q75", stats.quantiles->q75 * f},
                      {"q90", stats.quantiles->q90 * f}};
  } else {
    j["quantiles"] = nullptr;
  }
  j["master_seed"] = stats.master_seed;
  j["rng_name"] = stats.rng_name;
  j["seed_rule"] = stats.seed_rule;
  manifest.finished_at = utc_timestamp();
  j["manifest"] = nlohmann::ordered_json::parse(manifest.to_json());
  const std::string stats_path = (std::filesystem::path(o.out) / "stats.json").string();
  open_output(stats_path) << j.dump(2) << '\n';

  out << "median=" << (stats.quantiles ? format_number(stats.quantiles->median * model.time_factor)
                                       : std::string("n/a"))
      << " censored=" << stats.censored_count << "/" << o.replicas << '\n';
  err << "wrote " << samples_path << " and " << stats_path << '\n';
  return kSuccess;
}

int cmd_ballot(const BallotOptions& o, RunManifest& manifest, std::ostream& out,
               std::ostream& err) {
  const auto ns = parse_list<int>(o.n_grid);
  const auto lambdas = parse_list<double>(o.lambda_grid);
  if (o.replicas < 1) throw ConfigError("--replicas must be >= 1");
  manifest.master_seed = o.seed;
  manifest.config["n-grid"] = o.n_grid;
  manifest.config["lambda-grid"] = o.lambda_grid;
  manifest.config["replicas"] = std::to_string(o.replicas);
  manifest.config["exact-max-n"] = std::to_string(o.exact_max_n);
  manifest.config["seed"] = std::to_string(o.seed);

  CsvTable table{kBallotColumns, {}};
  Rng rng(o.seed);
  for (double lambda : lambdas) {
    for (int n : ns) {
      if (n < 1 || lambda < 1.0 || lambda > std::sqrt(static_cast<double>(n))) {
        err << "warning: skipping lambda=" << lambda << " n=" << n << " (need 1 <= lambda <= sqrt(n))\n";
        table.rows.push_back({format_number(lambda), std::to_string(n), "", "", "", "",
                              "skipped-lambda-outside-1-sqrt-n"});
        continue;
      }
      const SmirnovCell cell = smirnov_scaling_report({lambda}, {n}, o.replicas, rng,
                                                      o.exact_max_n).front();
      table.rows.push_back({format_number(lambda), std::to_string(n),
                            cell.exact ? format_number(*cell.exact) : "",
                            format_number(cell.mc.estimate), format_number(cell.mc.std_err),
                            format_number(cell.normalized), "ok"});
    }
  }

  if (o.out.empty()) {
    write_csv(out, table);
  } else {
    {
      auto file = open_output(o.out);
      write_csv(file, table);
    }
    write_manifest_file(o.out + ".manifest.json", manifest);
    err << "wrote " << o.out << '\n';
  }
  return kSuccess;
}

int cmd_figures(const FiguresOptions& o, RunManifest& manifest, std::ostream&, std::ostream& err) {
  if (o.out.empty()) throw ConfigError("--out is required");
  ensure_directory(o.out);
  const std::filesystem::path dir(o.out);
  manifest.config["out"] = o.out;
  manifest.config["fig1a"] = "b=2 rho=1.035:2.5:0.005";
  manifest.config["fig1b"] = "b=4 d=10000 rho=2 m=0:500";
  manifest.config["fig2"] = "b=2 d=" + std::to_string(o.fig2_d) + " m=" + std::to_string(o.fig2_m) +
                            " rho=2:5:0.01";
  manifest.config["fig2-d"] = std::to_string(o.fig2_d);
  manifest.config["fig2-m"] = std::to_string(o.fig2_m);

  CsvTable fig1a{kFig1aColumns, {}};
  for (double rho : parse_real_range("1.035:2.5", 0.005)) {
    const RegimeConstants k = regime_constants(2, rho);
    fig1a.rows.push_back({format_number(rho), format_number(k.x0), format_number(k.r)});
  }

  CsvTable fig1b{kFig1bColumns, {}};
  {
    const ModelParams p = ModelParams::from_rho(4, 10000, 2.0);
    const RegimeConstants k = regime_constants(4, 2.0);
    for (int m = 0; m <= 500; ++m) {
      const double root = solve_first_moment(p, m).t;
      fig1b.rows.push_back({std::to_string(m), format_number(root),
                            format_number(k.x0 * p.d + k.r * m)});
    }
  }

  CsvTable fig2{kFig2Columns, {}};
  for (double rho : parse_real_range("2:5", 0.01)) {
    const ModelParams p = ModelParams::from_rho(2, o.fig2_d, rho);
    fig2.rows.push_back({format_number(rho), format_number(solve_first_moment(p, o.fig2_m).t)});
  }

  for (const auto& [name, table] :
       {std::pair{"fig1a.csv", &fig1a}, std::pair{"fig1b.csv", &fig1b}, std::pair{"fig2.csv", &fig2}}) {
    auto file = open_output((dir / name).string());
    write_csv(file, *table);
  }
  write_manifest_file((dir / "manifest.json").string(), manifest);
  err << "wrote fig1a.csv, fig1b.csv, fig2.csv to " << o.out << '\n';
  return kSuccess;
}

}  // namespace brwss::cli
