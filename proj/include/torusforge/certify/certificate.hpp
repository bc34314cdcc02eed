#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "torusforge/exactalg/polynomial.hpp"

namespace torusforge::certify {

enum class CertificateKind {
  NoRealRoots,
  Irreducible,
  CycleTypeWitness,
  DoublyTransitive,
  Primitive,
  NoProperSubfield,
  PurelyImaginary,
  TorsionUnits,
  SpecialTorus,
};

/// Dedekind witnesses only ever prove that a Galois group is large, so a
/// failed search is Inconclusive rather than Refuted.
enum class Status { Certified, Refuted, Inconclusive };

std::string to_string(CertificateKind kind);
std::string to_string(Status status);
CertificateKind certificate_kind_from_string(const std::string& s);
Status status_from_string(const std::string& s);

struct Certificate {
  CertificateKind kind = CertificateKind::Irreducible;
  Status status = Status::Inconclusive;
  /// Polynomial the claim is about; subject is its hash.
  exactalg::RatPolynomial polynomial;
  std::string subject;
  nlohmann::json evidence = nlohmann::json::object();
  std::vector<Certificate> components;
  /// Result of re-checking the evidence when the certificate was built.
  bool verified = false;

  bool certified() const { return status == Status::Certified; }
  nlohmann::json to_json() const;
  static Certificate from_json(const nlohmann::json& j);
  /// SHA-256 of the canonical JSON.
  std::string hash() const;
};

/// Re-checks the evidence from scratch, recursively for components.
bool verify_certificate(const Certificate& c);

}  // namespace torusforge::certify
