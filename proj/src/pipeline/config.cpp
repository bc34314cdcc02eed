#include "torusforge/pipeline/config.hpp"

#include <cstdlib>
#include <fstream>

#include "torusforge/error.hpp"
#include "torusforge/periods/periods.hpp"

namespace torusforge::pipeline {

void RunConfig::validate() const {
  if (precision < periods::kMinPrecision || precision > periods::kMaxPrecision)
    throw Error(ErrorKind::InvalidInput, "precision must lie in [128, 4096]");
  if (lll_delta <= Rational(1, 4) || lll_delta >= 1) throw Error(ErrorKind::InvalidInput, "lll_delta must lie in (1/4, 1)");
  if (prime_budget == 0) throw Error(ErrorKind::InvalidInput, "prime budget must be positive");
  if (store_path.empty()) throw Error(ErrorKind::InvalidInput, "store path is empty");
}

nlohmann::json RunConfig::to_json() const {
  return {{"precision", precision},
          {"prime_budget", prime_budget},
          {"lll_delta", lll_delta.get_str()},
          {"embedding_bitmask", embedding_bitmask},
          {"seed", seed}};
}

void RunConfig::merge(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidInput, "config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "precision") precision = value.get<long>();
      else if (key == "prime_budget") prime_budget = value.get<std::size_t>();
      else if (key == "lll_delta") lll_delta = exactalg::parse_rational(value.get<std::string>());
      else if (key == "embedding_bitmask") embedding_bitmask = value.get<unsigned long>();
      else if (key == "store") store_path = value.get<std::string>();
      else if (key == "seed") seed = value.get<std::uint64_t>();
      else throw Error(ErrorKind::InvalidInput, "unknown config key " + key);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("bad config value: ") + e.what());
  }
}

RunConfig load_config() {
  RunConfig c;
  const char* path = std::getenv(kConfigEnv);
  if (path == nullptr || *path == '\0') return c;
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, std::string("cannot read config file ") + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("config file is not JSON: ") + e.what());
  }
  c.merge(j);
  return c;
}

}  // namespace torusforge::pipeline
