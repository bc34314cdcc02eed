#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>

#include "torusforge/certify/certificate.hpp"

namespace torusforge::pipeline {

/// Content-addressed JSON objects under root/objects/<sha256>.json and an
/// index root/index.json mapping "polyhash/kind/qualifier" to object hashes.
/// Every write goes to a temp file in the same directory and is renamed.
class CertificateStore {
 public:
  explicit CertificateStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  std::string put(const nlohmann::json& object);
  /// Throws invalid-input when the stored bytes no longer hash to `hash`.
  std::optional<nlohmann::json> get(const std::string& hash) const;

  void bind(const std::string& poly_hash, const std::string& kind, const std::string& qualifier,
            const std::string& object_hash);
  std::optional<std::string> lookup(const std::string& poly_hash, const std::string& kind,
                                    const std::string& qualifier = "") const;
  nlohmann::json index() const;

  /// Stores components first, then c; indexes each by (polynomial, kind).
  std::string put_certificate(const certify::Certificate& c);
  /// Loads and re-verifies; a certificate that fails verification is an
  /// invalid-input error, never returned.
  std::optional<certify::Certificate> load_certificate(const std::string& poly_hash, certify::CertificateKind kind) const;

 private:
  std::filesystem::path object_path(const std::string& hash) const;
  void write_atomic(const std::filesystem::path& path, const std::string& bytes) const;

  std::filesystem::path root_;
};

}  // namespace torusforge::pipeline
