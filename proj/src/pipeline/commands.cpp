#include "torusforge/pipeline/commands.hpp"

#include <cmath>
#include <sstream>

#include "torusforge/canonical.hpp"
#include "torusforge/certify/certify.hpp"
#include "torusforge/exactalg/matrix.hpp"
#include "torusforge/families/families.hpp"
#include "torusforge/isogeny/isogeny.hpp"
#include "torusforge/periods/periods.hpp"
#include "torusforge/pipeline/parse.hpp"
#include "torusforge/pipeline/store.hpp"
#include "torusforge/toruslab/toruslab.hpp"

namespace torusforge::pipeline {

using exactalg::RatPolynomial;

namespace {

nlohmann::json envelope(const std::string& command) { return {{"schema", kSchema}, {"command", command}}; }

int status_exit(certify::Status s) {
  switch (s) {
    case certify::Status::Certified: return exit_code::kCertified;
    case certify::Status::Refuted: return exit_code::kRefuted;
    case certify::Status::Inconclusive: return exit_code::kInconclusive;
  }
  return exit_code::kInternal;
}

nlohmann::json log2_json(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  return v;
}

void require_special_degree(const RatPolynomial& f) {
  if (f.degree() < 4 || f.degree() % 2 != 0)
    throw Error(ErrorKind::InvalidInput, "polynomial must have even degree >= 4, got degree " + std::to_string(f.degree()));
}

nlohmann::json lattice_invariants(const periods::PeriodLattice& l) {
  nlohmann::json j{{"precision", l.precision},
                   {"j_square_residual_log2", log2_json(l.j_square_residual_log2)},
                   {"commutator_residual_log2", log2_json(l.commutator_residual_log2)},
                   {"bound_log2", -static_cast<double>(l.precision) / 2}};
  j["within_bound"] = l.j_square_residual_log2 < -static_cast<double>(l.precision) / 2 &&
                      l.commutator_residual_log2 < -static_cast<double>(l.precision) / 2;
  return j;
}

nlohmann::json ranks_json(const toruslab::TorusAnalysis& a) {
  return {{"endomorphism", a.endomorphism.rank}, {"neron_severi", a.neron_severi.rank}, {"hom_dual", a.hom_dual.rank}};
}

bool analysis_settled(const toruslab::TorusAnalysis& a, bool need_qc) {
  return a.endomorphism.agreement && a.neron_severi.agreement && a.hom_dual.agreement && a.ns_in_hom_dual &&
         (!need_qc || a.endomorphism.all_in_qc);
}

std::string rank_line(const toruslab::TorusAnalysis& a) {
  std::ostringstream ss;
  ss << "ranks (End, NS, HomDual) = (" << a.endomorphism.rank << ", " << a.neron_severi.rank << ", "
     << a.hom_dual.rank << ")";
  return ss.str();
}

CommandResult verify_square_fixture(const RunConfig& config) {
  auto l = periods::lattice_from_rational_basis(exactalg::identity_rational(4), config.precision);
  auto l2 = periods::rebuild(l.source, std::min(2 * config.precision, periods::kMaxPrecision));
  toruslab::LabOptions options;
  options.lll_delta = config.lll_delta;
  toruslab::TorusAnalysis numeric = toruslab::analyze(l, options);
  toruslab::TorusAnalysis exact = toruslab::analyze_exact(l);
  const bool agree = numeric.endomorphism.hnf == exact.endomorphism.hnf &&
                     numeric.neron_severi.hnf == exact.neron_severi.hnf && numeric.hom_dual.hnf == exact.hom_dual.hnf;
  const nlohmann::json expected = {{"endomorphism", 8}, {"neron_severi", 4}, {"hom_dual", 8}};
  const bool matches = ranks_json(numeric) == expected && ranks_json(exact) == expected;

  CommandResult r;
  r.json = envelope("verify-torus");
  r.json["fixture"] = "square";
  r.json["ranks"] = ranks_json(numeric);
  r.json["exact_ranks"] = ranks_json(exact);
  r.json["paths_agree"] = agree;
  r.json["expected"] = expected;
  r.json["reports"] = numeric.to_json();
  r.json["exact_reports"] = exact.to_json();
  r.json["invariants"] = {{"coarse", lattice_invariants(l)},
                          {"check", lattice_invariants(l2)},
                          {"ns_in_hom_dual", numeric.ns_in_hom_dual && exact.ns_in_hom_dual}};
  r.json["verdict"] = matches && agree ? "certified" : "inconclusive";
  r.exit_code = matches && agree ? exit_code::kCertified : exit_code::kInconclusive;
  r.text = "square torus fixture: " + rank_line(numeric) + " (near-kernel), " + rank_line(exact) + " (exact); paths " +
           (agree ? "agree" : "DISAGREE") + "\n";
  return r;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::EndpointRoot:
    case ErrorKind::BadPrime:
    case ErrorKind::RankDeficient:
    case ErrorKind::UnsupportedParameter:
    case ErrorKind::InvalidQuadruple:
    case ErrorKind::InvalidLedger:
    case ErrorKind::Unsupported: return exit_code::kInvalidInput;
    case ErrorKind::Precision:
    case ErrorKind::PrecisionExhausted: return exit_code::kPrecision;
    case ErrorKind::Dependency:
    case ErrorKind::NoExtension: return exit_code::kDependency;
    case ErrorKind::Internal: return exit_code::kInternal;
  }
  return exit_code::kInternal;
}

CommandResult error_result(const Error& e) {
  CommandResult r;
  r.exit_code = exit_code_for(e.kind());
  r.json = {{"schema", kSchema}, {"error", {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}}}};
  r.text = std::string("error: ") + e.what() + "\n";
  if (e.kind() == ErrorKind::PrecisionExhausted || e.kind() == ErrorKind::Precision)
    r.text += "hint: raise --precision (up to 4096) or try another --embedding\n";
  return r;
}

CommandResult cmd_generate(const GenerateRequest& request, const RunConfig& config) {
  config.validate();
  families::FamilySpec spec;
  spec.kind = families::family_kind_from_string(request.kind);
  spec.g = request.g;
  if (spec.kind == families::FamilyKind::Quadruple) {
    if (request.quadruple) {
      spec.quadruple = parse_quadruple(request.g, *request.quadruple);
      spec.quadruple->validate();
    } else {
      families::QuadrupleEnumerator it(request.g, families::EnumerationBudget{});
      spec.quadruple = it.next();
      if (!spec.quadruple) throw Error(ErrorKind::NoExtension, "no admissible quadruple within the enumeration budget");
    }
  } else if (request.quadruple) {
    throw Error(ErrorKind::InvalidInput, "--quadruple only applies to the quadruple family");
  }
  const RatPolynomial f = spec.polynomial();

  CommandResult r;
  r.json = envelope("generate");
  r.json["spec"] = spec.to_json();
  r.json["polynomial"] = exactalg::to_json(f);
  r.json["polynomial_text"] = exactalg::to_string(f);
  r.json["polynomial_hash"] = exactalg::polynomial_hash(f);
  r.text = exactalg::to_string(f) + "\n";
  if (spec.kind == families::FamilyKind::TruncatedExponential) {
    auto scaled = families::scaled_truncated_exponential(2 * spec.g);
    r.json["integer_polynomial"] = exactalg::to_json(exactalg::to_rational(scaled));
    r.json["integer_polynomial_text"] = exactalg::to_string(scaled);
    r.text += exactalg::to_string(scaled) + "\n";
  }
  if (spec.kind == families::FamilyKind::Quadruple) {
    auto t = families::max_c_without_real_roots(spec.g, spec.quadruple->l, spec.quadruple->p, spec.quadruple->b);
    r.json["real_root_threshold"] = t.to_json();
  }
  CertificateStore store(config.store_path);
  store.bind(exactalg::polynomial_hash(f), "FamilySpec", "", store.put(spec.to_json()));
  return r;
}

namespace {

bool records_quadruple(const certify::Certificate& c, const families::AdmissibleQuadruple& q) {
  for (const auto& part : c.components) {
    if (part.kind != certify::CertificateKind::PurelyImaginary) continue;
    if (!part.evidence.contains("real_root_threshold")) return false;
    return families::AdmissibleQuadruple::from_json(part.evidence["real_root_threshold"]["quadruple"]) == q;
  }
  return false;
}

CommandResult certify_command(const RatPolynomial& f, const std::optional<families::AdmissibleQuadruple>& q,
                              const RunConfig& config) {
  config.validate();
  require_special_degree(f);
  CertificateStore store(config.store_path);
  const std::string poly_hash = exactalg::polynomial_hash(f);
  std::optional<certify::Certificate> cert = store.load_certificate(poly_hash, certify::CertificateKind::SpecialTorus);
  bool cached = cert && cert->status != certify::Status::Inconclusive && (!q || records_quadruple(*cert, *q));
  if (!cached) {
    certify::CertifyOptions options;
    options.prime_budget = config.prime_budget;
    cert = q ? certify::certify_special(*q, options) : certify::certify_special(f, options);
    store.put_certificate(*cert);
  }
  CommandResult r;
  r.exit_code = status_exit(cert->status);
  r.json = envelope("certify");
  r.json["polynomial"] = exactalg::to_json(f);
  r.json["polynomial_hash"] = poly_hash;
  r.json["status"] = certify::to_string(cert->status);
  r.json["certificate_hash"] = cert->hash();
  r.json["certificate"] = cert->to_json();
  std::ostringstream ss;
  ss << "SpecialTorus for " << exactalg::to_string(f) << ": " << certify::to_string(cert->status)
     << (cached ? " (from store, re-verified)" : "") << "\n";
  for (const auto& c : cert->components)
    ss << "  " << certify::to_string(c.kind) << ": " << certify::to_string(c.status) << "\n";
  if (cert->evidence.contains("reason")) ss << "  reason: " << cert->evidence["reason"].dump() << "\n";
  ss << "  hash " << cert->hash() << "\n";
  r.text = ss.str();
  return r;
}

}  // namespace

CommandResult cmd_certify(const RatPolynomial& f, const RunConfig& config) {
  return certify_command(f, std::nullopt, config);
}

CommandResult cmd_certify(const families::AdmissibleQuadruple& q, const RunConfig& config) {
  q.validate();
  return certify_command(families::quadruple_polynomial(q), q, config);
}

CommandResult cmd_verify_torus(const VerifyRequest& request, const RunConfig& config) {
  config.validate();
  if (!request.fixture.empty()) {
    if (request.fixture != "square") throw Error(ErrorKind::InvalidInput, "unknown fixture " + request.fixture);
    return verify_square_fixture(config);
  }
  if (!request.polynomial) throw Error(ErrorKind::InvalidInput, "verify-torus needs a polynomial or --fixture");
  const RatPolynomial& f = *request.polynomial;
  require_special_degree(f);
  const long g = f.degree() / 2;
  const std::string poly_hash = exactalg::polynomial_hash(f);

  CertificateStore store(config.store_path);
  std::optional<certify::Certificate> cert = store.load_certificate(poly_hash, certify::CertificateKind::SpecialTorus);
  if (!cert || !cert->certified()) {
    if (!request.force)
      throw Error(ErrorKind::Dependency, "no certified SpecialTorus certificate in the store; run certify first or pass --force");
    certify::CertifyOptions options;
    options.prime_budget = config.prime_budget;
    cert = certify::certify_special(f, options);
  }

  toruslab::LabOptions options;
  options.lll_delta = config.lll_delta;
  long precision = config.precision;
  std::optional<periods::PeriodLattice> coarse, check;
  std::optional<toruslab::TorusAnalysis> analysis;
  while (true) {
    coarse = periods::build_period_lattice(f, precision, config.embedding_bitmask, config.seed);
    check = periods::build_period_lattice(f, 2 * precision, config.embedding_bitmask, config.seed);
    analysis = toruslab::analyze(*coarse, *check, options);
    if (analysis_settled(*analysis, true)) break;
    if (2 * precision > periods::kMaxPrecision)
      throw Error(ErrorKind::PrecisionExhausted, "ranks did not stabilize between " + std::to_string(precision) +
                                                     " and " + std::to_string(2 * precision) + " bits");
    precision *= 2;
  }

  nlohmann::json automorphism;
  std::optional<toruslab::AutomorphismReport> aut;
  try {
    aut = toruslab::automorphism_report(*coarse, analysis->endomorphism, cert->components.at(3));
    automorphism = aut->to_json();
  } catch (const Error& e) {
    automorphism = {{"error", e.what()}};
  }

  const bool charpoly_ok = exactalg::characteristic_polynomial(coarse->companion) == exactalg::monic(f);
  const nlohmann::json predicted = {{"endomorphism", 2 * g}, {"neron_severi", 0}, {"hom_dual", 0},
                                    {"automorphism", {{"torsion", "Z/2"}, {"free_rank", g - 1}}}};
  const nlohmann::json ranks = ranks_json(*analysis);
  const bool ranks_match = ranks["endomorphism"] == 2 * g && ranks["neron_severi"] == 0 && ranks["hom_dual"] == 0;
  const bool rank_zero = analysis->neron_severi.rank_zero_certified && analysis->hom_dual.rank_zero_certified;
  const bool invariants_ok = lattice_invariants(*coarse)["within_bound"] && lattice_invariants(*check)["within_bound"] &&
                             charpoly_ok && analysis->ns_in_hom_dual;
  const bool aut_ok = aut && aut->to_json() == predicted["automorphism"];

  std::string verdict = "inconclusive";
  int code = exit_code::kInconclusive;
  if (ranks_match && rank_zero && aut_ok && invariants_ok && cert->certified()) {
    verdict = "certified";
    code = exit_code::kCertified;
  } else if (!ranks_match && invariants_ok) {
    verdict = "refuted";
    code = exit_code::kRefuted;
  }

  CommandResult r;
  r.exit_code = code;
  r.json = envelope("verify-torus");
  r.json["polynomial"] = exactalg::to_json(f);
  r.json["polynomial_hash"] = poly_hash;
  r.json["g"] = g;
  r.json["embedding_bitmask"] = config.embedding_bitmask;
  r.json["precisions"] = {coarse->precision, check->precision};
  r.json["certificate"] = {{"hash", cert->hash()}, {"status", certify::to_string(cert->status)}};
  r.json["forced"] = request.force;
  r.json["invariants"] = {{"coarse", lattice_invariants(*coarse)},
                          {"check", lattice_invariants(*check)},
                          {"charpoly_equals_f", charpoly_ok},
                          {"ns_in_hom_dual", analysis->ns_in_hom_dual}};
  r.json["ranks"] = ranks;
  r.json["rank_zero_certified"] = {{"neron_severi", analysis->neron_severi.rank_zero_certified},
                                   {"hom_dual", analysis->hom_dual.rank_zero_certified}};
  r.json["endomorphisms_in_qc"] = analysis->endomorphism.all_in_qc;
  r.json["reports"] = analysis->to_json();
  r.json["automorphism"] = automorphism;
  r.json["predicted"] = predicted;
  r.json["verdict"] = verdict;
  const std::string report_hash = store.put(r.json);
  store.bind(poly_hash, "TorusReport", std::to_string(coarse->precision), report_hash);

  std::ostringstream ss;
  ss << "torus of " << exactalg::to_string(f) << " at " << coarse->precision << "/" << check->precision << " bits\n"
     << "  " << rank_line(*analysis) << ", predicted (" << 2 * g << ", 0, 0)\n"
     << "  agreement End/NS/HomDual: " << analysis->endomorphism.agreement << "/" << analysis->neron_severi.agreement
     << "/" << analysis->hom_dual.agreement << ", End generators in Q[C]: " << analysis->endomorphism.all_in_qc << "\n"
     << "  automorphisms: " << automorphism.dump() << "\n"
     << "  verdict: " << verdict << "\n";
  r.text = ss.str();
  return r;
}

CommandResult cmd_family(long g, long count, const RunConfig& config) {
  config.validate();
  if (g < 2) throw Error(ErrorKind::InvalidInput, "family needs g >= 2");
  if (count < 1) throw Error(ErrorKind::InvalidInput, "family needs count >= 1");
  certify::CertifyOptions certify_options;
  certify_options.prime_budget = config.prime_budget;

  // The first enumerated quadruple that certifies special seeds the ledger.
  std::optional<isogeny::FamilyLedger> ledger;
  families::QuadrupleEnumerator it(g, families::EnumerationBudget{});
  std::string last_failure = "enumeration produced no quadruple";
  for (int tries = 0; tries < 32 && !ledger; ++tries) {
    auto q = it.next();
    if (!q) break;
    try {
      ledger = isogeny::seed_ledger(*q, certify_options);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Dependency) throw;
      last_failure = e.what();
    }
  }
  if (!ledger) throw Error(ErrorKind::NoExtension, "no enumerated quadruple certified special: " + last_failure);

  isogeny::ExtensionBudget budget;
  budget.certify = certify_options;
  for (long k = 1; k < count; ++k) ledger = isogeny::extend_family(*ledger, budget);

  auto matrix = isogeny::witness_matrix(*ledger);
  nlohmann::json mj = nlohmann::json::array();
  for (const auto& row : matrix) {
    nlohmann::json rj = nlohmann::json::array();
    for (const auto& cell : row) rj.push_back(cell ? nlohmann::json(*cell) : nlohmann::json(nullptr));
    mj.push_back(rj);
  }
  bool complete = true;
  for (std::size_t i = 0; i < matrix.size(); ++i)
    for (std::size_t j = 0; j < matrix.size(); ++j)
      if (i != j && !matrix[i][j]) complete = false;

  CertificateStore store(config.store_path);
  for (const auto& e : ledger->entries) store.put_certificate(e.certificate);
  const nlohmann::json ledger_json = ledger->to_json();
  const std::string ledger_hash = store.put(ledger_json);
  store.bind(exactalg::polynomial_hash(families::quadruple_polynomial(ledger->entries.front().quadruple)),
             "FamilyLedger", std::to_string(count), ledger_hash);

  CommandResult r;
  r.exit_code = complete ? exit_code::kCertified : exit_code::kInconclusive;
  r.json = envelope("family");
  r.json["g"] = g;
  r.json["count"] = count;
  r.json["ledger"] = ledger_json;
  r.json["ledger_hash"] = ledger_hash;
  r.json["witness_matrix"] = mj;
  r.json["complete"] = complete;

  std::ostringstream ss;
  ss << "family g=" << g << ", " << ledger->entries.size() << " entries\n";
  for (std::size_t k = 0; k < ledger->entries.size(); ++k) {
    const auto& e = ledger->entries[k];
    ss << "  [" << k << "] (l,p,b,c) = (" << e.quadruple.l << ", " << e.quadruple.p << ", " << e.quadruple.b << ", "
       << e.quadruple.c << ")  witness " << (e.witness ? std::to_string(*e.witness) : std::string("-")) << "  "
       << certify::to_string(e.certificate.status) << "\n";
  }
  ss << "  witness matrix:\n";
  for (const auto& row : matrix) {
    ss << "   ";
    for (const auto& cell : row) {
      std::string s = cell ? std::to_string(*cell) : std::string(".");
      ss << " " << std::string(s.size() < 4 ? 4 - s.size() : 0, ' ') << s;
    }
    ss << "\n";
  }
  r.text = ss.str();
  return r;
}

CommandResult cmd_show(const std::string& key, const RunConfig& config) {
  CertificateStore store(config.store_path);
  CommandResult r;
  r.json = envelope("show");
  const bool looks_like_hash = key.size() == 64 && key.find_first_not_of("0123456789abcdef") == std::string::npos;
  if (looks_like_hash) {
    auto object = store.get(key);
    if (!object) throw Error(ErrorKind::InvalidInput, "no stored object " + key);
    r.json["hash"] = key;
    r.json["object"] = *object;
    r.text = object->dump(2) + "\n";
    if (object->contains("kind") && object->contains("subject") && object->contains("evidence")) {
      certify::Certificate c = certify::Certificate::from_json(*object);
      const bool ok = certify::verify_certificate(c);
      r.json["reverified"] = ok;
      if (!ok) throw Error(ErrorKind::InvalidInput, "stored certificate " + key + " failed re-verification");
    }
    return r;
  }
  const RatPolynomial f = parse_polynomial(key);
  const std::string prefix = exactalg::polynomial_hash(f) + "/";
  nlohmann::json entries = nlohmann::json::object();
  std::ostringstream ss;
  const nlohmann::json index = store.index();
  for (const auto& [k, v] : index.items()) {
    if (k.rfind(prefix, 0) != 0) continue;
    entries[k.substr(prefix.size())] = v;
    ss << k.substr(prefix.size()) << "  " << v.get<std::string>() << "\n";
  }
  r.json["polynomial_hash"] = exactalg::polynomial_hash(f);
  r.json["entries"] = entries;
  r.text = entries.empty() ? "nothing stored for " + exactalg::to_string(f) + "\n" : ss.str();
  return r;
}

}  // namespace torusforge::pipeline
