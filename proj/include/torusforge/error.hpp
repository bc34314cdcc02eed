#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace torusforge {

enum class ErrorKind {
  InvalidInput,
  EndpointRoot,
  BadPrime,
  RankDeficient,
  Precision,
  PrecisionExhausted,
  UnsupportedParameter,
  InvalidQuadruple,
  Dependency,
  InvalidLedger,
  NoExtension,
  Unsupported,
  Internal,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind so the
/// CLI can map it onto an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::EndpointRoot: return "endpoint-root";
    case ErrorKind::BadPrime: return "bad-prime";
    case ErrorKind::RankDeficient: return "rank-deficient";
    case ErrorKind::Precision: return "precision";
    case ErrorKind::PrecisionExhausted: return "precision-exhausted";
    case ErrorKind::UnsupportedParameter: return "unsupported-parameter";
    case ErrorKind::InvalidQuadruple: return "invalid-quadruple";
    case ErrorKind::Dependency: return "dependency";
    case ErrorKind::InvalidLedger: return "invalid-ledger";
    case ErrorKind::NoExtension: return "no-extension";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Internal: return "internal-error";
  }
  return "unknown";
}

}  // namespace torusforge
