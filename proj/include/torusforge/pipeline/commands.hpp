#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

#include "torusforge/error.hpp"
#include "torusforge/exactalg/polynomial.hpp"
#include "torusforge/families/families.hpp"
#include "torusforge/pipeline/config.hpp"

namespace torusforge::pipeline {

namespace exit_code {
inline constexpr int kCertified = 0;
inline constexpr int kInternal = 1;
inline constexpr int kRefuted = 2;
inline constexpr int kInconclusive = 3;
inline constexpr int kInvalidInput = 4;
inline constexpr int kPrecision = 5;
inline constexpr int kDependency = 6;
}  // namespace exit_code

int exit_code_for(ErrorKind kind);

struct CommandResult {
  int exit_code = exit_code::kCertified;
  nlohmann::json json;
  std::string text;
};

CommandResult error_result(const Error& e);

struct GenerateRequest {
  /// "selmer", "exp" / "truncated-exponential", or "quadruple".
  std::string kind;
  long g = 2;
  /// "l,p,b,c" for quadruples; otherwise the first enumerated one is used.
  std::optional<std::string> quadruple;
};

struct VerifyRequest {
  std::optional<exactalg::RatPolynomial> polynomial;
  /// "square" selects the rational (C/Z[i])^2 fixture.
  std::string fixture;
  /// Run without a stored SpecialTorus certificate.
  bool force = false;
};

CommandResult cmd_generate(const GenerateRequest& request, const RunConfig& config);
CommandResult cmd_certify(const exactalg::RatPolynomial& f, const RunConfig& config);
/// Certifies the quadruple's trinomial and records its real-root threshold.
CommandResult cmd_certify(const families::AdmissibleQuadruple& q, const RunConfig& config);
CommandResult cmd_verify_torus(const VerifyRequest& request, const RunConfig& config);
CommandResult cmd_family(long g, long count, const RunConfig& config);
/// key: an object hash, or a polynomial whose index entries are listed.
CommandResult cmd_show(const std::string& key, const RunConfig& config);

}  // namespace torusforge::pipeline
