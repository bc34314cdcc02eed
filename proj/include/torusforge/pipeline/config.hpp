#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>

#include "torusforge/exactalg/numbers.hpp"

namespace torusforge::pipeline {

/// Names a JSON config file read before command-line flags are applied.
inline constexpr const char* kConfigEnv = "TORUS_FORGE_CONFIG";

struct RunConfig {
  long precision = 256;
  std::size_t prime_budget = 100;
  Rational lll_delta = Rational(99, 100);
  /// Bit k conjugates the k-th upper-half root; 0 keeps all upper.
  unsigned long embedding_bitmask = 0;
  std::string store_path = "torus-forge-store";
  /// Root-finder jitter only; outputs do not depend on it.
  std::uint64_t seed = 0;

  /// precision in [128, 4096], lll_delta in (1/4, 1), prime_budget >= 1.
  void validate() const;
  nlohmann::json to_json() const;
  /// Overrides fields named in j; unknown keys are invalid input.
  void merge(const nlohmann::json& j);
};

/// Defaults, overridden by the file named in TORUS_FORGE_CONFIG if set.
RunConfig load_config();

}  // namespace torusforge::pipeline
