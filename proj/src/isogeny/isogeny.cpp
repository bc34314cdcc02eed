#include "torusforge/isogeny/isogeny.hpp"

#include <algorithm>
#include <set>

#include "torusforge/error.hpp"
#include "torusforge/exactalg/finite_field.hpp"
#include "torusforge/exactalg/number_theory.hpp"
#include "torusforge/exactalg/resultant.hpp"

namespace torusforge::isogeny {

using exactalg::RatPolynomial;

namespace {

bool divides(long d, const Integer& x) { return mpz_divisible_ui_p(x.get_mpz_t(), static_cast<unsigned long>(d)) != 0; }

Integer mod(const Integer& x, const Integer& m) {
  Integer r = x % m;
  if (r < 0) r += m;
  return r;
}

Rational sign_power(long exponent) { return exponent % 2 == 0 ? Rational(1) : Rational(-1); }

DivisibilityMethod method_from_string(const std::string& s) {
  if (s == "lemma-v") return DivisibilityMethod::LemmaV;
  if (s == "lemma-vi") return DivisibilityMethod::LemmaVI;
  if (s == "dedekind") return DivisibilityMethod::DedekindTest;
  if (s == "none") return DivisibilityMethod::None;
  throw Error(ErrorKind::InvalidLedger, "unknown divisibility method " + s);
}

nlohmann::json prime_map_json(const std::map<long, DivisibilityMethod>& m) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [prime, method] : m) j[std::to_string(prime)] = to_string(method);
  return j;
}

std::map<long, DivisibilityMethod> prime_map_from_json(const nlohmann::json& j) {
  std::map<long, DivisibilityMethod> m;
  for (const auto& [key, value] : j.items()) m[std::stol(key)] = method_from_string(value.get<std::string>());
  return m;
}

void check_shared_parameters(const FamilyLedger& ledger) {
  if (ledger.entries.empty()) throw Error(ErrorKind::InvalidLedger, "ledger is empty");
  const auto& first = ledger.entries.front().quadruple;
  for (const auto& e : ledger.entries) {
    const auto& q = e.quadruple;
    if (q.g != first.g || q.l != first.l || q.p != first.p)
      throw Error(ErrorKind::InvalidLedger, "ledger entries do not share (g, l, p)");
  }
}

std::vector<long> witness_primes(const FamilyLedger& ledger) {
  std::vector<long> out;
  for (const auto& e : ledger.entries)
    if (e.witness) out.push_back(*e.witness);
  return out;
}

DiscriminantFacts facts_with(const AdmissibleQuadruple& q, const std::vector<long>& primes) {
  DiscriminantFacts f = discriminant_facts(q);
  for (long ell : primes) f.record(ell);
  return f;
}

/// Smallest t with ell*t a primitive root mod p and l not dividing ell*t.
std::optional<Integer> choose_b(const AdmissibleQuadruple& base, long ell, long max_multiplier, long skip) {
  long seen = 0;
  for (long t = 1; t <= max_multiplier; ++t) {
    Integer b = Integer(ell) * t;
    if (divides(base.l, b) || divides(base.p, b)) continue;
    if (!exactalg::primitive_root_check(b, static_cast<std::uint64_t>(base.p))) continue;
    if (seen++ == skip) return b;
  }
  return std::nullopt;
}

}  // namespace

Rational trinomial_discriminant(long n, const Rational& a, const Rational& b) {
  if (n < 2) throw Error(ErrorKind::InvalidInput, "trinomial degree must be at least 2");
  const unsigned long un = static_cast<unsigned long>(n);
  Rational first = Rational(exactalg::pow(Integer(n), un)) * exactalg::pow(b, un - 1);
  Rational second = Rational(exactalg::pow(Integer(1 - n), un - 1)) * exactalg::pow(a, un);
  return sign_power(n * (n - 1) / 2) * (first + second);
}

Rational trinomial_discriminant(const AdmissibleQuadruple& q) {
  q.validate();
  const long n = 2 * q.g;
  // x^(2g) - b x - p c / l^l.
  Rational constant = -Rational(Integer(q.p) * q.c) / Rational(exactalg::pow(Integer(q.l), static_cast<unsigned long>(q.l)));
  constant.canonicalize();
  Rational closed = trinomial_discriminant(n, Rational(-q.b), constant);
  Rational via_resultant = exactalg::discriminant(families::quadruple_polynomial(q));
  if (closed != via_resultant)
    throw Error(ErrorKind::Internal, "closed-form discriminant " + closed.get_str() + " differs from resultant " +
                                         via_resultant.get_str());
  return closed;
}

std::string to_string(Divisibility d) {
  switch (d) {
    case Divisibility::Divisible: return "divisible";
    case Divisibility::NotDivisible: return "not-divisible";
    case Divisibility::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

std::string to_string(DivisibilityMethod m) {
  switch (m) {
    case DivisibilityMethod::LemmaV: return "lemma-v";
    case DivisibilityMethod::LemmaVI: return "lemma-vi";
    case DivisibilityMethod::DedekindTest: return "dedekind";
    case DivisibilityMethod::None: return "none";
  }
  return "none";
}

DivisibilityResult field_disc_divisibility(const AdmissibleQuadruple& q, long ell) {
  q.validate();
  if (ell < 2 || !exactalg::is_prime(Integer(ell))) throw Error(ErrorKind::InvalidInput, "ell must be prime");
  if (ell == q.l) throw Error(ErrorKind::Unsupported, "ell = l: the polynomial is not ell-integral");
  const Integer e(ell);
  const Integer two_glp = Integer(2) * q.g * q.l * q.p;
  if (divides(ell, q.b) && !divides(ell, two_glp) && mod(q.c, e * e) == e)
    return {Divisibility::Divisible, DivisibilityMethod::LemmaV};
  const Integer pb = Integer(2 * q.g - 1) * q.p * q.b;
  if (divides(ell, q.c) && !divides(ell, pb)) return {Divisibility::NotDivisible, DivisibilityMethod::LemmaVI};
  // f is monic and ell-integral, so a squarefree reduction means ell does
  // not divide disc(f), hence not the field discriminant.
  auto fbar = exactalg::FpPolynomial::reduce(families::quadruple_polynomial(q), static_cast<std::uint64_t>(ell));
  auto g = exactalg::gcd(fbar, fbar.derivative());
  if (g.degree() == 0) return {Divisibility::NotDivisible, DivisibilityMethod::DedekindTest};
  return {Divisibility::Indeterminate, DivisibilityMethod::None};
}

void DiscriminantFacts::record(long ell) {
  DivisibilityResult r = field_disc_divisibility(quadruple, ell);
  if (r.status == Divisibility::Divisible) divisible_primes[ell] = r.method;
  if (r.status == Divisibility::NotDivisible) nondivisible_primes[ell] = r.method;
}

nlohmann::json DiscriminantFacts::to_json() const {
  return {{"quadruple", quadruple.to_json()},
          {"poly_disc", {{"closed_form", closed_form.get_str()}, {"resultant", resultant.get_str()}}},
          {"divisible_primes", prime_map_json(divisible_primes)},
          {"nondivisible_primes", prime_map_json(nondivisible_primes)}};
}

DiscriminantFacts DiscriminantFacts::from_json(const nlohmann::json& j) {
  DiscriminantFacts f;
  f.quadruple = AdmissibleQuadruple::from_json(j.at("quadruple"));
  f.closed_form = exactalg::parse_rational(j.at("poly_disc").at("closed_form").get<std::string>());
  f.resultant = exactalg::parse_rational(j.at("poly_disc").at("resultant").get<std::string>());
  f.divisible_primes = prime_map_from_json(j.at("divisible_primes"));
  f.nondivisible_primes = prime_map_from_json(j.at("nondivisible_primes"));
  return f;
}

DiscriminantFacts discriminant_facts(const AdmissibleQuadruple& q) {
  DiscriminantFacts f;
  f.quadruple = q;
  f.closed_form = trinomial_discriminant(q);
  f.resultant = exactalg::discriminant(families::quadruple_polynomial(q));
  return f;
}

long FamilyLedger::g() const {
  if (entries.empty()) throw Error(ErrorKind::InvalidLedger, "ledger is empty");
  return entries.front().quadruple.g;
}

nlohmann::json FamilyLedger::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries) {
    arr.push_back({{"quadruple", e.quadruple.to_json()},
                   {"certificate_hash", e.certificate.hash()},
                   {"certificate", e.certificate.to_json()},
                   {"discriminant", e.facts.to_json()},
                   {"witness", e.witness ? nlohmann::json(*e.witness) : nlohmann::json(nullptr)}});
  }
  return {{"entries", arr}};
}

FamilyLedger FamilyLedger::from_json(const nlohmann::json& j) {
  FamilyLedger ledger;
  try {
    for (const auto& item : j.at("entries")) {
      LedgerEntry e;
      e.quadruple = AdmissibleQuadruple::from_json(item.at("quadruple"));
      e.certificate = certify::Certificate::from_json(item.at("certificate"));
      if (e.certificate.hash() != item.at("certificate_hash").get<std::string>())
        throw Error(ErrorKind::InvalidLedger, "certificate hash mismatch");
      if (!e.certificate.certified() || e.certificate.kind != certify::CertificateKind::SpecialTorus ||
          !certify::verify_certificate(e.certificate))
        throw Error(ErrorKind::InvalidLedger, "entry certificate does not verify");
      if (!(e.certificate.polynomial == families::quadruple_polynomial(e.quadruple)))
        throw Error(ErrorKind::InvalidLedger, "certificate is about a different polynomial");
      e.facts = DiscriminantFacts::from_json(item.at("discriminant"));
      if (!item.at("witness").is_null()) e.witness = item.at("witness").get<long>();
      ledger.entries.push_back(std::move(e));
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidLedger) throw;
    throw Error(ErrorKind::InvalidLedger, e.what());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidLedger, e.what());
  }
  check_shared_parameters(ledger);
  // Recompute every fact rather than trusting the file.
  const std::vector<long> primes = witness_primes(ledger);
  for (std::size_t k = 0; k < ledger.entries.size(); ++k) {
    const auto& e = ledger.entries[k];
    if ((k == 0) != !e.witness) throw Error(ErrorKind::InvalidLedger, "only the first entry lacks a witness prime");
    DiscriminantFacts fresh = facts_with(e.quadruple, primes);
    if (fresh.to_json() != e.facts.to_json())
      throw Error(ErrorKind::InvalidLedger, "discriminant facts of entry " + std::to_string(k) + " do not recompute");
    if (e.witness) {
      if (!fresh.divisible_primes.count(*e.witness))
        throw Error(ErrorKind::InvalidLedger, "witness prime does not divide its own discriminant");
      for (std::size_t i = 0; i < k; ++i)
        if (!ledger.entries[i].facts.nondivisible_primes.count(*e.witness))
          throw Error(ErrorKind::InvalidLedger, "witness prime is not certified unramified in an earlier field");
    }
  }
  return ledger;
}

FamilyLedger seed_ledger(const AdmissibleQuadruple& q, const certify::CertifyOptions& options) {
  q.validate();
  certify::Certificate c = certify::certify_special(q, options);
  if (!c.certified())
    throw Error(ErrorKind::Dependency, "seed quadruple is not certified special (" + certify::to_string(c.status) + ")");
  FamilyLedger ledger;
  ledger.entries.push_back({q, std::move(c), discriminant_facts(q), std::nullopt});
  return ledger;
}

FamilyLedger extend_family(const FamilyLedger& ledger, const ExtensionBudget& budget) {
  check_shared_parameters(ledger);
  const AdmissibleQuadruple& base = ledger.entries.front().quadruple;
  const std::vector<long> existing_primes = witness_primes(ledger);
  const std::set<long> used(existing_primes.begin(), existing_primes.end());
  const Integer two_glp = Integer(2) * base.g * base.l * base.p;

  std::string blocking = "no odd prime below " + std::to_string(budget.max_ell) + " is coprime to 2glp and fresh";
  for (long ell = 3; ell < budget.max_ell; ell = static_cast<long>(exactalg::next_prime(static_cast<std::uint64_t>(ell)))) {
    if (!exactalg::is_prime(Integer(ell))) continue;
    if (divides(ell, two_glp) || base.g % ell == 0 || used.count(ell)) continue;
    // ell must be certified unramified in every earlier field.
    bool clear = true;
    for (const auto& e : ledger.entries) {
      if (field_disc_divisibility(e.quadruple, ell).status != Divisibility::NotDivisible) {
        clear = false;
        blocking = "ell = " + std::to_string(ell) + " is not certified unramified in every earlier field";
        break;
      }
    }
    if (!clear) continue;

    for (long b_index = 0;; ++b_index) {
      std::optional<Integer> b = choose_b(base, ell, budget.max_b_multiplier, b_index);
      if (!b) {
        blocking = "no multiple of ell = " + std::to_string(ell) + " is a primitive root mod p within the budget";
        break;
      }
      const Integer threshold = families::max_c_without_real_roots(base.g, base.l, base.p, *b).max_c;
      const Integer e(ell), e2 = e * e;
      // Largest c <= max_c with c = ell mod ell^2.
      Integer c = threshold - mod(threshold - e, e2);
      long tried = 0;
      for (; tried < budget.c_candidates; c -= e2) {
        if (divides(base.l, c)) continue;
        ++tried;
        Integer adjusted = families::adjust_c(c, {base.g, base.l, base.p, *b}, ell);
        AdmissibleQuadruple q{base.g, base.l, base.p, *b, adjusted};
        q.validate();
        if (field_disc_divisibility(q, ell).status != Divisibility::Divisible) continue;
        bool duplicate = false;
        for (const auto& existing : ledger.entries) duplicate = duplicate || existing.quadruple == q;
        if (duplicate) continue;
        certify::Certificate cert = certify::certify_special(q, budget.certify);
        if (!cert.certified()) {
          blocking = "candidate quadruples at ell = " + std::to_string(ell) + " were not certified special";
          continue;
        }
        FamilyLedger out = ledger;
        std::vector<long> primes = existing_primes;
        primes.push_back(ell);
        for (auto& entry : out.entries) entry.facts = facts_with(entry.quadruple, primes);
        out.entries.push_back({q, std::move(cert), facts_with(q, primes), ell});
        return out;
      }
    }
  }
  throw Error(ErrorKind::NoExtension, blocking);
}

std::optional<long> non_isogeny_witness(const LedgerEntry& a, const LedgerEntry& b) {
  std::optional<long> best;
  auto scan = [&](const DiscriminantFacts& x, const DiscriminantFacts& y) {
    for (const auto& [prime, method] : x.divisible_primes) {
      (void)method;
      if (y.nondivisible_primes.count(prime) && (!best || prime < *best)) best = prime;
    }
  };
  scan(a.facts, b.facts);
  scan(b.facts, a.facts);
  return best;
}

std::vector<std::vector<std::optional<long>>> witness_matrix(const FamilyLedger& ledger) {
  const std::size_t n = ledger.entries.size();
  std::vector<std::vector<std::optional<long>>> m(n, std::vector<std::optional<long>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) m[i][j] = non_isogeny_witness(ledger.entries[i], ledger.entries[j]);
  return m;
}

}  // namespace torusforge::isogeny
