#include "torusforge/certify/certificate.hpp"

#include "torusforge/canonical.hpp"
#include "torusforge/error.hpp"

namespace torusforge::certify {

namespace {

const std::pair<CertificateKind, const char*> kKinds[] = {
    {CertificateKind::NoRealRoots, "NoRealRoots"},
    {CertificateKind::Irreducible, "Irreducible"},
    {CertificateKind::CycleTypeWitness, "CycleTypeWitness"},
    {CertificateKind::DoublyTransitive, "DoublyTransitive"},
    {CertificateKind::Primitive, "Primitive"},
    {CertificateKind::NoProperSubfield, "NoProperSubfield"},
    {CertificateKind::PurelyImaginary, "PurelyImaginary"},
    {CertificateKind::TorsionUnits, "TorsionUnits"},
    {CertificateKind::SpecialTorus, "SpecialTorus"},
};

}  // namespace

std::string to_string(CertificateKind kind) {
  for (const auto& [k, name] : kKinds)
    if (k == kind) return name;
  return "unknown";
}

CertificateKind certificate_kind_from_string(const std::string& s) {
  for (const auto& [k, name] : kKinds)
    if (s == name) return k;
  throw Error(ErrorKind::InvalidInput, "unknown certificate kind '" + s + "'");
}

std::string to_string(Status status) {
  switch (status) {
    case Status::Certified: return "certified";
    case Status::Refuted: return "refuted";
    case Status::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

Status status_from_string(const std::string& s) {
  if (s == "certified") return Status::Certified;
  if (s == "refuted") return Status::Refuted;
  if (s == "inconclusive") return Status::Inconclusive;
  throw Error(ErrorKind::InvalidInput, "unknown certificate status '" + s + "'");
}

nlohmann::json Certificate::to_json() const {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["kind"] = to_string(kind);
  j["status"] = to_string(status);
  j["polynomial"] = exactalg::to_json(polynomial);
  j["subject"] = subject;
  j["evidence"] = evidence;
  j["components"] = nlohmann::json::array();
  for (const auto& c : components) j["components"].push_back(c.to_json());
  j["verified"] = verified;
  return j;
}

Certificate Certificate::from_json(const nlohmann::json& j) {
  Certificate c;
  try {
    if (j.at("schema").get<std::string>() != kSchema) throw Error(ErrorKind::InvalidInput, "unknown certificate schema");
    c.kind = certificate_kind_from_string(j.at("kind").get<std::string>());
    c.status = status_from_string(j.at("status").get<std::string>());
    c.polynomial = exactalg::rat_polynomial_from_json(j.at("polynomial"));
    c.subject = j.at("subject").get<std::string>();
    c.evidence = j.at("evidence");
    for (const auto& sub : j.at("components")) c.components.push_back(from_json(sub));
    c.verified = j.at("verified").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed certificate: ") + e.what());
  }
  return c;
}

std::string Certificate::hash() const { return content_hash(to_json()); }

}  // namespace torusforge::certify
