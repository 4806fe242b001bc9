#pragma once

// Command-line front end. `run` is the whole program minus process setup so
// tests can drive it in-process.

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace brwss::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 2, kNumericError = 3 };

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// CSV dialect: comma separated, header row, no quoting, LF line endings.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column; ConfigError if absent.
  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;
  const std::string& cell(std::size_t row, std::string_view name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const CsvTable& table);

// Shortest decimal string that round-trips to the same double.
std::string format_number(double value);

inline const std::vector<std::string> kPredictColumns = {
    "b", "d", "m", "rho", "regime", "t_root", "t_predicted",
    "term_leading", "term_m", "term_correction", "warnings"};
inline const std::vector<std::string> kSamplesColumns = {
    "replica", "hit_time", "censoring", "events", "peak_pop"};
inline const std::vector<std::string> kBallotColumns = {
    "lambda", "n", "p_exact", "p_mc", "mc_std_err", "normalized", "status"};
inline const std::vector<std::string> kFig1aColumns = {"rho", "x0", "r"};
inline const std::vector<std::string> kFig1bColumns = {"m", "t_root", "t_expansion"};
inline const std::vector<std::string> kFig2Columns = {"rho", "t_root"};

struct RunManifest {
  std::string tool_version;
  std::string subcommand;
  std::map<std::string, std::string> config;
  std::uint64_t master_seed = 0;
  std::string rng_name;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> hypotheses_warnings;

  std::string to_json() const;
};

std::string utc_timestamp();

}  // namespace brwss::cli
