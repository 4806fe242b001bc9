#include <chrono>
#include <ctime>

#include <json.hpp>

#include "brwss/cli.hpp"

namespace brwss::cli {

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool_version"] = tool_version;
  j["subcommand"] = subcommand;
  j["config"] = config;
  j["master_seed"] = master_seed;
  j["rng_name"] = rng_name;
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  j["hypotheses_warnings"] = hypotheses_warnings;
  return j.dump(2);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

}  // namespace brwss::cli
