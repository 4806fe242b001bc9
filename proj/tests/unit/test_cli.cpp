#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "brwss/cli.hpp"

using namespace brwss::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("brwss-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CsvTable parse(const std::string& text) {
  std::istringstream in(text);
  return read_csv(in);
}

}  // namespace

TEST_CASE("csv round trip") {
  CsvTable t{{"a", "b"}, {{"1", "x"}, {"2.5", ""}}};
  std::ostringstream out;
  write_csv(out, t);
  CHECK(out.str() == "a,b\n1,x\n2.5,\n");
  const auto back = parse(out.str());
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(back.number(1, "a") == 2.5);
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e300) == "1e+300");
}

TEST_CASE("predict") {
  auto r = run_cli({"predict", "--b", "2", "--d", "20", "--rho", "1.5", "--m-range", "0:3"});
  REQUIRE(r.code == 0);
  auto t = parse(r.out);
  CHECK(t.header == kPredictColumns);
  REQUIRE(t.rows.size() == 4);
  CHECK(t.number(0, "t_predicted") == 0.0);
  CHECK(t.cell(0, "warnings").find("m=0") != std::string::npos);
  CHECK(t.cell(1, "regime") == "slow");
  CHECK(t.number(3, "t_root") > t.number(1, "t_root"));

  r = run_cli({"predict", "--b", "2", "--d", "1000", "--rho-range", "2:5:0.5", "--m", "1"});
  REQUIRE(r.code == 0);
  t = parse(r.out);
  CHECK(t.rows.size() == 7);
  CHECK(t.cell(6, "regime") == "fast");

  r = run_cli({"predict", "--b", "2", "--d", "20", "--rho", "3", "--m", "1", "--regime", "slow"});
  CHECK(r.code == 2);
  CHECK(r.err.find("rho < e") != std::string::npos);

  r = run_cli({"predict", "--b", "2", "--d", "20", "--lambda1", "0.5", "--lambda2", "2", "--m", "1",
               "--raw-time", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto rescaled = parse(run_cli({"predict", "--b", "2", "--d", "20", "--lambda1", "0.25",
                                       "--m", "1"}).out);
  CHECK(j[0]["t_root"].get<double>() == doctest::Approx(rescaled.number(0, "t_root") / 2.0));

  CHECK(run_cli({"predict", "--b", "2", "--d", "20", "--m", "1"}).code == 2);
  CHECK(run_cli({"predict", "--b", "2", "--d", "20", "--rho", "1.5", "--m", "21"}).code == 2);
  CHECK(run_cli({"predict", "--bogus"}).code == 2);
  CHECK(run_cli({"--version"}).code == 0);
  CHECK(run_cli({"--help"}).code == 0);
  CHECK(run_cli({}).code == 2);
}

TEST_CASE("predict writes a manifest next to its output") {
  const auto dir = scratch("predict");
  const auto file = (dir / "p.csv").string();
  REQUIRE(run_cli({"predict", "--b", "4", "--d", "100", "--rho", "2", "--m", "1", "--out", file}).code == 0);
  std::ifstream in(file + ".manifest.json");
  const auto manifest = nlohmann::json::parse(in);
  CHECK(manifest["subcommand"] == "predict");
  CHECK(manifest["config"]["d"] == "100");
  CHECK(read_csv_file(file).header == kPredictColumns);
}

TEST_CASE("config file fills in missing flags") {
  const auto dir = scratch("config");
  const auto config = (dir / "run.conf").string();
  std::ofstream(config) << "b=4\nd=100\nrho=2\nm=3\n";
  auto r = run_cli({"predict", "--config", config});
  REQUIRE(r.code == 0);
  auto t = parse(r.out);
  CHECK(t.cell(0, "b") == "4");
  CHECK(t.cell(0, "m") == "3");
  r = run_cli({"predict", "--config", config, "--m", "5"});
  REQUIRE(r.code == 0);
  CHECK(parse(r.out).cell(0, "m") == "5");
}

TEST_CASE("simulate") {
  const auto a = scratch("sim-a"), b = scratch("sim-b");
  for (const auto& dir : {a, b})
    REQUIRE(run_cli({"simulate", "--b", "2", "--d", "10", "--rho", "1.5", "--m", "1", "--replicas", "50",
                     "--seed", "7", "--out", dir.string()}).code == 0);
  std::ifstream sa(a / "samples.csv"), sb(b / "samples.csv");
  std::stringstream ca, cb;
  ca << sa.rdbuf();
  cb << sb.rdbuf();
  CHECK(ca.str() == cb.str());
  const auto samples = parse(ca.str());
  CHECK(samples.header == kSamplesColumns);
  CHECK(samples.rows.size() == 50);
  std::ifstream stats_file(a / "stats.json");
  const auto stats = nlohmann::json::parse(stats_file);
  CHECK(stats["manifest"]["master_seed"] == 7);
  CHECK(stats["quantiles"]["median"].get<double>() > 0.0);

  const auto cover = scratch("sim-cover");
  REQUIRE(run_cli({"simulate", "--b", "2", "--d", "4", "--rho", "1.5", "--cover", "--mode", "full",
                   "--replicas", "20", "--out", cover.string()}).code == 0);
  CHECK(run_cli({"simulate", "--b", "2", "--d", "30", "--rho", "1.5", "--cover", "--mode", "full",
                 "--out", cover.string()}).code == 2);
  CHECK(run_cli({"simulate", "--b", "2", "--d", "10", "--rho", "1.5", "--mode", "weird"}).code == 2);
}

TEST_CASE("ballot") {
  auto r = run_cli({"ballot", "--n-grid", "1,4,9", "--lambda-grid", "1,3", "--replicas", "2000"});
  REQUIRE(r.code == 0);
  const auto t = parse(r.out);
  CHECK(t.header == kBallotColumns);
  REQUIRE(t.rows.size() == 6);
  CHECK(t.number(0, "p_exact") == doctest::Approx(1.0));
  CHECK(t.cell(3, "status") != "ok");
  CHECK(t.cell(5, "status") == "ok");
  CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("figures") {
  const auto dir = scratch("figures");
  REQUIRE(run_cli({"figures", "--out", dir.string()}).code == 0);
  const auto fig1a = read_csv_file((dir / "fig1a.csv").string());
  CHECK(fig1a.header == kFig1aColumns);
  for (std::size_t i = 1; i < fig1a.rows.size(); ++i) {
    CHECK(fig1a.number(i, "x0") < fig1a.number(i - 1, "x0"));
    CHECK(fig1a.number(i, "r") > fig1a.number(i - 1, "r"));
  }
  const auto fig1b = read_csv_file((dir / "fig1b.csv").string());
  CHECK(fig1b.rows.size() == 501);
  for (std::size_t m = 0; m <= 70; ++m)
    CHECK(std::fabs(fig1b.number(m, "t_root") - fig1b.number(m, "t_expansion")) <= 2.0);
  const auto fig2 = read_csv_file((dir / "fig2.csv").string());
  CHECK(fig2.rows.size() == 301);
  for (std::size_t i = 1; i < fig2.rows.size(); ++i)
    CHECK(fig2.number(i, "t_root") < fig2.number(i - 1, "t_root"));
  std::ifstream in(dir / "manifest.json");
  CHECK(nlohmann::json::parse(in)["config"]["fig2-d"] == "1000");

  std::ofstream(dir / "blocker") << "x";
  CHECK(run_cli({"figures", "--out", (dir / "blocker" / "sub").string()}).code == 2);
}
