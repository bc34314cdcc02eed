#include "torusforge/pipeline/store.hpp"

#include <unistd.h>

#include <atomic>
#include <fstream>
#include <sstream>

#include "torusforge/canonical.hpp"
#include "torusforge/error.hpp"

namespace torusforge::pipeline {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string index_key(const std::string& poly_hash, const std::string& kind, const std::string& qualifier) {
  return poly_hash + "/" + kind + "/" + qualifier;
}

}  // namespace

CertificateStore::CertificateStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_ / "objects", ec);
  if (ec) throw Error(ErrorKind::InvalidInput, "cannot create store at " + root_.string() + ": " + ec.message());
}

fs::path CertificateStore::object_path(const std::string& hash) const { return root_ / "objects" / (hash + ".json"); }

void CertificateStore::write_atomic(const fs::path& path, const std::string& bytes) const {
  static std::atomic<unsigned long> counter{0};
  fs::path tmp = path.parent_path() /
                 (".tmp-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" + path.filename().string());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + tmp.string());
    out << bytes;
    out.flush();
    if (!out) throw Error(ErrorKind::InvalidInput, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorKind::InvalidInput, "cannot rename into " + path.string() + ": " + ec.message());
  }
}

std::string CertificateStore::put(const nlohmann::json& object) {
  const std::string bytes = canonical_dump(object);
  const std::string hash = sha256_hex(bytes);
  const fs::path path = object_path(hash);
  if (!fs::exists(path)) write_atomic(path, bytes);
  return hash;
}

std::optional<nlohmann::json> CertificateStore::get(const std::string& hash) const {
  const fs::path path = object_path(hash);
  if (!fs::exists(path)) return std::nullopt;
  const std::string bytes = read_file(path);
  if (sha256_hex(bytes) != hash) throw Error(ErrorKind::InvalidInput, "stored object " + hash + " is corrupt");
  return nlohmann::json::parse(bytes);
}

nlohmann::json CertificateStore::index() const {
  const fs::path path = root_ / "index.json";
  if (!fs::exists(path)) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("store index is not JSON: ") + e.what());
  }
}

void CertificateStore::bind(const std::string& poly_hash, const std::string& kind, const std::string& qualifier,
                            const std::string& object_hash) {
  nlohmann::json idx = index();
  idx[index_key(poly_hash, kind, qualifier)] = object_hash;
  write_atomic(root_ / "index.json", idx.dump(1));
}

std::optional<std::string> CertificateStore::lookup(const std::string& poly_hash, const std::string& kind,
                                                    const std::string& qualifier) const {
  nlohmann::json idx = index();
  auto it = idx.find(index_key(poly_hash, kind, qualifier));
  if (it == idx.end()) return std::nullopt;
  return it->get<std::string>();
}

std::string CertificateStore::put_certificate(const certify::Certificate& c) {
  for (const auto& comp : c.components) put_certificate(comp);
  const std::string hash = put(c.to_json());
  bind(c.subject, certify::to_string(c.kind), "", hash);
  return hash;
}

std::optional<certify::Certificate> CertificateStore::load_certificate(const std::string& poly_hash,
                                                                       certify::CertificateKind kind) const {
  auto hash = lookup(poly_hash, certify::to_string(kind));
  if (!hash) return std::nullopt;
  auto object = get(*hash);
  if (!object) return std::nullopt;
  certify::Certificate c = certify::Certificate::from_json(*object);
  if (c.subject != poly_hash || c.kind != kind || !certify::verify_certificate(c))
    throw Error(ErrorKind::InvalidInput, "stored certificate " + *hash + " failed re-verification");
  c.verified = true;
  return c;
}

}  // namespace torusforge::pipeline
