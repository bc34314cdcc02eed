#pragma once

#include <nlohmann/json.hpp>

#include <string>

namespace torusforge {

/// Canonical serialization: sorted keys, no whitespace, UTF-8.
/// nlohmann::json objects are std::map backed, so dump() already sorts keys.
inline std::string canonical_dump(const nlohmann::json& j) { return j.dump(); }

std::string sha256_hex(const std::string& bytes);

inline std::string content_hash(const nlohmann::json& j) { return sha256_hex(canonical_dump(j)); }

inline constexpr const char* kSchema = "torus-forge/1";

}  // namespace torusforge
