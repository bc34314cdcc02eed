#include "torusforge/certify/certify.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

#include "torusforge/error.hpp"
#include "torusforge/exactalg/newton_polygon.hpp"
#include "torusforge/exactalg/number_theory.hpp"
#include "torusforge/exactalg/resultant.hpp"
#include "torusforge/exactalg/sturm.hpp"

namespace torusforge::certify {

using exactalg::is_prime;
using exactalg::next_prime;
using exactalg::polynomial_hash;

namespace {

Certificate blank(CertificateKind kind, const RatPolynomial& f) {
  Certificate c;
  c.kind = kind;
  c.polynomial = f;
  c.subject = polynomial_hash(f);
  return c;
}

Certificate finish(Certificate c) {
  c.verified = verify_certificate(c);
  return c;
}

std::optional<FactorPattern> good_pattern(const RatPolynomial& f, std::uint64_t p) {
  try {
    auto pat = exactalg::factor_degree_pattern(f, p);
    if (!pat.squarefree) return std::nullopt;
    return pat;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::BadPrime) return std::nullopt;
    throw;
  }
}

std::vector<bool> subset_sums(long n, const std::vector<long>& parts) {
  std::vector<bool> reach(static_cast<std::size_t>(n) + 1, false);
  reach[0] = true;
  for (long d : parts)
    for (long s = n; s >= d; --s)
      if (reach[static_cast<std::size_t>(s - d)]) reach[static_cast<std::size_t>(s)] = true;
  return reach;
}

// Small prime factors by trial division, plus a prime cofactor if one remains.
std::vector<Integer> some_prime_factors(Integer n) {
  n = abs(n);
  std::vector<Integer> out;
  if (n <= 1) return out;
  for (unsigned long q = 2; q < 100000 && Integer(q) * q <= n; ++q) {
    if (n % q != 0) continue;
    out.emplace_back(q);
    while (n % q == 0) n /= q;
  }
  if (n > 1 && is_prime(n)) out.push_back(n);
  return out;
}

long prime_part_above_half(long n, const std::vector<long>& degrees) {
  for (long d : degrees)
    if (2 * d > n && is_prime(Integer(d))) return d;
  return 0;
}

bool is_rational_square(const Rational& q) {
  return q >= 0 && mpz_perfect_square_p(q.get_num_mpz_t()) && mpz_perfect_square_p(q.get_den_mpz_t());
}

RatPolynomial x_power_minus_one(std::uint64_t m) {
  std::vector<Rational> c(m + 1, Rational(0));
  c[0] = -1;
  c[m] = 1;
  return RatPolynomial(std::move(c));
}

// Least m >= 3 with phi(m) <= deg f such that f shares a factor with x^m - 1.
std::optional<std::uint64_t> root_of_unity_index(const RatPolynomial& f) {
  const auto n = static_cast<std::uint64_t>(f.degree());
  for (std::uint64_t m = 3; m <= 2 * n * n + 2; ++m) {
    if (exactalg::euler_phi(m) > n) continue;
    if (exactalg::gcd(f, x_power_minus_one(m)).degree() > 0) return m;
  }
  return std::nullopt;
}

nlohmann::json patterns_json(const std::vector<FactorPattern>& ps) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& p : ps) a.push_back(p.to_json());
  return a;
}

bool pattern_matches(const RatPolynomial& f, const nlohmann::json& j) {
  const auto p = j.at("prime").get<std::uint64_t>();
  auto pat = good_pattern(f, p);
  return pat && pat->to_json() == j;
}

nlohmann::json special_conclusions(long g) {
  return {{"endomorphism_algebra", "E = Q[x]/(f), degree " + std::to_string(2 * g)},
          {"neron_severi_rank", 0},
          {"hom_to_dual_rank", 0},
          {"automorphism_group", {{"torsion", "Z/2"}, {"free_rank", g - 1}}}};
}

}  // namespace

std::vector<std::uint64_t> cyclotomic_indices(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t m = 1; m <= 2 * n * n + 2; ++m)
    if (exactalg::euler_phi(m) == n) out.push_back(m);
  return out;
}

std::vector<FactorPattern> frobenius_scan(const RatPolynomial& f, std::size_t budget) {
  std::vector<FactorPattern> out;
  if (f.degree() < 1) throw Error(ErrorKind::InvalidInput, "frobenius scan needs a nonconstant polynomial");
  for (std::uint64_t p = 2; out.size() < budget; p = next_prime(p))
    if (auto pat = good_pattern(f, p)) out.push_back(*pat);
  return out;
}

std::vector<FactorPattern> frobenius_scan(const RatPolynomial& f, const std::vector<std::uint64_t>& primes) {
  std::vector<std::uint64_t> sorted = primes;
  std::sort(sorted.begin(), sorted.end());
  std::vector<FactorPattern> out;
  for (auto p : sorted)
    if (auto pat = good_pattern(f, p)) out.push_back(*pat);
  return out;
}

std::vector<long> possible_factor_degrees(long n, const std::vector<FactorPattern>& patterns, bool has_rational_root) {
  std::vector<bool> allowed(static_cast<std::size_t>(n) + 1, true);
  for (const auto& p : patterns) {
    auto reach = subset_sums(n, p.degrees);
    for (long d = 0; d <= n; ++d) allowed[static_cast<std::size_t>(d)] = allowed[static_cast<std::size_t>(d)] && reach[static_cast<std::size_t>(d)];
  }
  // A factor of degree 1 or n-1 means a rational root.
  if (!has_rational_root && n >= 2) {
    allowed[1] = false;
    allowed[static_cast<std::size_t>(n - 1)] = false;
  }
  std::vector<long> out;
  for (long d = 1; d < n; ++d)
    if (allowed[static_cast<std::size_t>(d)]) out.push_back(d);
  return out;
}

Certificate certify_purely_imaginary(const RatPolynomial& f) {
  if (f.is_zero()) throw Error(ErrorKind::InvalidInput, "zero polynomial");
  Certificate c = blank(CertificateKind::PurelyImaginary, f);
  auto summary = exactalg::sturm_summary(f);
  c.evidence = {{"degree", f.degree()}, {"sturm", summary}};
  if (f.degree() % 2 != 0) {
    c.status = Status::Refuted;
    c.evidence["reason"] = "odd-degree";
  } else {
    c.status = summary["real_roots"].get<long>() == 0 ? Status::Certified : Status::Refuted;
  }
  return finish(std::move(c));
}

Certificate certify_irreducible(const RatPolynomial& f, const CertifyOptions& options) {
  const long n = f.degree();
  if (n < 1) throw Error(ErrorKind::InvalidInput, "irreducibility of a constant");
  Certificate c = blank(CertificateKind::Irreducible, f);
  if (n == 1) {
    c.status = Status::Certified;
    c.evidence = {{"route", "linear"}};
    return finish(std::move(c));
  }
  if (!exactalg::is_squarefree(f)) {
    c.status = Status::Refuted;
    c.evidence = {{"route", "repeated-factor"}, {"gcd", exactalg::to_json(exactalg::gcd(f, f.derivative()))}};
    return finish(std::move(c));
  }
  const auto roots = exactalg::rational_roots(f);
  if (!roots.empty()) {
    c.status = Status::Refuted;
    c.evidence = {{"route", "rational-root"}, {"root", exactalg::to_decimal(roots.front())}};
    return finish(std::move(c));
  }

  // Eisenstein-Dumas: a prime must divide a_0 / a_n for a sloped single segment.
  const Rational ratio = f[0] / f.leading();
  if (ratio != 0) {
    std::set<Integer> candidates;
    for (const auto& q : some_prime_factors(ratio.get_num())) candidates.insert(q);
    for (const auto& q : some_prime_factors(ratio.get_den())) candidates.insert(q);
    for (const auto& l : candidates) {
      auto np = exactalg::newton_polygon(f, l);
      if (np.eisenstein_dumas(n)) {
        c.status = Status::Certified;
        c.evidence = {{"route", "eisenstein-dumas"}, {"prime", l.get_str()}, {"newton_polygon", np.to_json()}};
        return finish(std::move(c));
      }
    }
  }

  std::vector<FactorPattern> useful;
  std::vector<long> remaining = possible_factor_degrees(n, {}, false);
  std::size_t examined = 0;
  for (std::uint64_t p = 2; examined < options.prime_budget; p = next_prime(p)) {
    auto pat = good_pattern(f, p);
    if (!pat) continue;
    ++examined;
    if (pat->degrees == std::vector<long>{n}) {
      c.status = Status::Certified;
      c.evidence = {{"route", "single-prime"}, {"pattern", pat->to_json()}};
      return finish(std::move(c));
    }
    auto trial = useful;
    trial.push_back(*pat);
    auto next = possible_factor_degrees(n, trial, false);
    if (next.size() < remaining.size()) {
      useful = std::move(trial);
      remaining = std::move(next);
    }
    if (remaining.empty()) {
      c.status = Status::Certified;
      c.evidence = {{"route", "pattern-intersection"}, {"patterns", patterns_json(useful)}, {"rational_roots", 0}};
      return finish(std::move(c));
    }
  }
  c.status = Status::Inconclusive;
  c.evidence = {{"route", "none"}, {"primes_examined", examined}, {"remaining_degrees", remaining}};
  return finish(std::move(c));
}

Certificate certify_primitive(const RatPolynomial& f, const Certificate& irreducible, const CertifyOptions& options) {
  if (irreducible.kind != CertificateKind::Irreducible || !irreducible.certified() ||
      irreducible.subject != polynomial_hash(f)) {
    throw Error(ErrorKind::Dependency, "primitivity needs a certified irreducibility certificate for the same polynomial");
  }
  const long n = f.degree();
  Certificate c = blank(CertificateKind::Primitive, f);
  c.components.push_back(irreducible);
  // An A_n versus S_n hint; not needed for primitivity.
  const bool disc_square = n >= 2 && is_rational_square(exactalg::discriminant(f));
  if (n == 1 || is_prime(Integer(n))) {
    c.status = Status::Certified;
    c.evidence = {{"route", "prime-degree"}, {"discriminant_square", disc_square}};
    return finish(std::move(c));
  }
  std::size_t examined = 0;
  for (std::uint64_t p = 2; examined < options.prime_budget; p = next_prime(p)) {
    auto pat = good_pattern(f, p);
    if (!pat) continue;
    ++examined;
    if (pat->degrees == std::vector<long>{1, n - 1}) {
      c.status = Status::Certified;
      c.evidence = {{"route", "n-1-cycle"},
                    {"witness", pat->to_json()},
                    {"doubly_transitive", true},
                    {"discriminant_square", disc_square}};
      return finish(std::move(c));
    }
    if (long q = prime_part_above_half(n, pat->degrees); q > 0) {
      c.status = Status::Certified;
      c.evidence = {{"route", "prime-cycle"},
                    {"witness", pat->to_json()},
                    {"cycle_length", q},
                    {"contains_alternating_group", q + 3 <= n},
                    {"discriminant_square", disc_square}};
      return finish(std::move(c));
    }
  }
  c.status = Status::Inconclusive;
  c.evidence = {{"route", "none"}, {"primes_examined", examined}, {"discriminant_square", disc_square}};
  return finish(std::move(c));
}

Certificate certify_no_proper_subfield(const Certificate& irreducible, const Certificate& primitive) {
  if (irreducible.kind != CertificateKind::Irreducible || !irreducible.certified()) {
    throw Error(ErrorKind::Dependency, "missing certified Irreducible component");
  }
  if (primitive.kind != CertificateKind::Primitive || !primitive.certified()) {
    throw Error(ErrorKind::Dependency, "missing certified Primitive component");
  }
  if (irreducible.subject != primitive.subject) throw Error(ErrorKind::Dependency, "components describe different polynomials");
  Certificate c = blank(CertificateKind::NoProperSubfield, irreducible.polynomial);
  c.components = {irreducible, primitive};
  c.status = Status::Certified;
  c.evidence = {{"degree", irreducible.polynomial.degree()}};
  return finish(std::move(c));
}

Certificate certify_torsion_units(const Certificate& no_proper_subfield) {
  if (no_proper_subfield.kind != CertificateKind::NoProperSubfield || !no_proper_subfield.certified()) {
    throw Error(ErrorKind::Dependency, "torsion units need a certified NoProperSubfield component");
  }
  const RatPolynomial& f = no_proper_subfield.polynomial;
  const long n = f.degree();
  if (n < 4) throw Error(ErrorKind::UnsupportedParameter, "torsion-unit argument needs degree at least 4");
  Certificate c = blank(CertificateKind::TorsionUnits, f);
  c.components = {no_proper_subfield};
  // Logically: a root of unity other than +-1 generates a quadratic or
  // intermediate subfield. The gcds below are an independent sanity check.
  nlohmann::json checked = nlohmann::json::array();
  bool trivial = true;
  for (auto m : cyclotomic_indices(static_cast<std::uint64_t>(n))) {
    checked.push_back(m);
    if (exactalg::gcd(f, x_power_minus_one(m)).degree() > 0) trivial = false;
  }
  c.status = trivial ? Status::Certified : Status::Refuted;
  c.evidence = {{"roots_of_unity", {"1", "-1"}}, {"sanity_indices", checked}, {"sanity_gcds_trivial", trivial}};
  return finish(std::move(c));
}

namespace {

Certificate special_bundle(const RatPolynomial& f, const CertifyOptions& options, const nlohmann::json* threshold);

}  // namespace

Certificate certify_special(const RatPolynomial& f, const CertifyOptions& options) {
  return special_bundle(f, options, nullptr);
}

nlohmann::json real_root_threshold_record(const families::AdmissibleQuadruple& q) {
  q.validate();
  const auto t = families::max_c_without_real_roots(q.g, q.l, q.p, q.b);
  auto below = [](double x) { return Integer(static_cast<long>(std::ceil(x)) - 1); };
  nlohmann::json j = t.to_json();
  j["quadruple"] = q.to_json();
  j["sturm_agrees_with_minus_1"] = below(t.threshold_minus_1) == t.max_c;
  j["sturm_agrees_with_minus_b"] = below(t.threshold_minus_b) == t.max_c;
  j["c_within_threshold"] = q.c <= t.max_c;
  return j;
}

Certificate certify_special(const families::AdmissibleQuadruple& q, const CertifyOptions& options) {
  const nlohmann::json threshold = real_root_threshold_record(q);
  return special_bundle(families::quadruple_polynomial(q), options, &threshold);
}

namespace {

Certificate special_bundle(const RatPolynomial& f, const CertifyOptions& options, const nlohmann::json* threshold) {
  const long n = f.degree();
  if (n < 4 || n % 2 != 0) throw Error(ErrorKind::InvalidInput, "special tori need even degree 2g >= 4");
  Certificate bundle = blank(CertificateKind::SpecialTorus, f);
  const long g = n / 2;

  Certificate imaginary = certify_purely_imaginary(f);
  if (threshold) {
    imaginary.evidence["real_root_threshold"] = *threshold;
    imaginary = finish(std::move(imaginary));
  }
  Certificate irreducible = certify_irreducible(f, options);
  if (imaginary.status == Status::Refuted || irreducible.status == Status::Refuted) {
    bundle.status = Status::Refuted;
    bundle.evidence = {{"g", g}, {"reason", "component-refuted"}};
    bundle.components = {irreducible, imaginary};
    return finish(std::move(bundle));
  }
  std::optional<Certificate> primitive;
  if (irreducible.certified()) primitive = certify_primitive(f, irreducible, options);
  if (imaginary.certified() && primitive && primitive->certified()) {
    Certificate nps = certify_no_proper_subfield(irreducible, *primitive);
    Certificate torsion = certify_torsion_units(nps);
    bundle.components = {irreducible, imaginary, nps, torsion};
    if (torsion.certified()) {
      bundle.status = Status::Certified;
      bundle.evidence = {{"g", g}, {"conclusions", special_conclusions(g)}};
    } else {
      bundle.status = Status::Refuted;
      bundle.evidence = {{"g", g}, {"reason", "component-refuted"}};
    }
    return finish(std::move(bundle));
  }
  bundle.components = {irreducible, imaginary};
  if (primitive) bundle.components.push_back(*primitive);
  if (auto m = root_of_unity_index(f)) {
    // f shares a factor with x^m - 1: either f is reducible or Q[x]/(f)
    // contains a primitive m-th root of unity, m >= 3. Not special either way.
    bundle.status = Status::Refuted;
    bundle.evidence = {{"g", g}, {"reason", "root-of-unity"}, {"m", *m}};
  } else {
    bundle.status = Status::Inconclusive;
    bundle.evidence = {{"g", g}, {"reason", "component-inconclusive"}};
  }
  return finish(std::move(bundle));
}

}  // namespace

// ------------------------------------------------------------ verification

namespace {

bool verify_irreducible(const Certificate& c) {
  const RatPolynomial& f = c.polynomial;
  const long n = f.degree();
  const auto route = c.evidence.at("route").get<std::string>();
  if (route == "linear") return c.certified() && n == 1;
  if (route == "repeated-factor") return c.status == Status::Refuted && !exactalg::is_squarefree(f);
  if (route == "rational-root") {
    const Rational r = exactalg::parse_rational(c.evidence.at("root").get<std::string>());
    return c.status == Status::Refuted && n >= 2 && f.evaluate(r) == 0;
  }
  if (route == "eisenstein-dumas") {
    const Integer l = exactalg::parse_integer(c.evidence.at("prime").get<std::string>());
    auto np = exactalg::newton_polygon(f, l);
    return c.certified() && np.eisenstein_dumas(n) && np.to_json() == c.evidence.at("newton_polygon");
  }
  if (route == "single-prime") {
    const auto& pj = c.evidence.at("pattern");
    return c.certified() && pattern_matches(f, pj) && pj.at("degrees") == nlohmann::json::array({n});
  }
  if (route == "pattern-intersection") {
    if (!c.certified() || !exactalg::rational_roots(f).empty()) return false;
    std::vector<FactorPattern> ps;
    for (const auto& pj : c.evidence.at("patterns")) {
      if (!pattern_matches(f, pj)) return false;
      ps.push_back(exactalg::factor_degree_pattern(f, pj.at("prime").get<std::uint64_t>()));
    }
    return possible_factor_degrees(n, ps, false).empty();
  }
  if (route == "none") return c.status == Status::Inconclusive;
  return false;
}

bool verify_primitive(const Certificate& c) {
  const RatPolynomial& f = c.polynomial;
  const long n = f.degree();
  if (c.components.size() != 1 || c.components[0].kind != CertificateKind::Irreducible ||
      !c.components[0].certified() || c.components[0].subject != c.subject || !verify_certificate(c.components[0])) {
    return false;
  }
  const auto route = c.evidence.at("route").get<std::string>();
  if (route == "prime-degree") return c.certified() && is_prime(Integer(n));
  if (route == "n-1-cycle") {
    const auto& w = c.evidence.at("witness");
    return c.certified() && pattern_matches(f, w) && w.at("degrees") == nlohmann::json::array({1, n - 1});
  }
  if (route == "prime-cycle") {
    const auto& w = c.evidence.at("witness");
    if (!c.certified() || !pattern_matches(f, w)) return false;
    const long q = c.evidence.at("cycle_length").get<long>();
    const auto degrees = w.at("degrees").get<std::vector<long>>();
    return std::find(degrees.begin(), degrees.end(), q) != degrees.end() && 2 * q > n && is_prime(Integer(q));
  }
  if (route == "none") return c.status == Status::Inconclusive;
  return false;
}

bool components_consistent(const Certificate& c) {
  for (const auto& sub : c.components)
    if (sub.subject != c.subject || !verify_certificate(sub)) return false;
  return true;
}

bool verify_special(const Certificate& c) {
  const long n = c.polynomial.degree();
  if (n < 4 || n % 2 != 0 || c.evidence.at("g").get<long>() != n / 2) return false;
  if (!components_consistent(c)) return false;
  if (c.certified()) {
    const std::vector<CertificateKind> expected{CertificateKind::Irreducible, CertificateKind::PurelyImaginary,
                                                CertificateKind::NoProperSubfield, CertificateKind::TorsionUnits};
    if (c.components.size() != expected.size()) return false;
    for (std::size_t i = 0; i < expected.size(); ++i)
      if (c.components[i].kind != expected[i] || !c.components[i].certified()) return false;
    return c.evidence.at("conclusions") == special_conclusions(n / 2);
  }
  const auto reason = c.evidence.at("reason").get<std::string>();
  if (reason == "component-refuted") {
    return std::any_of(c.components.begin(), c.components.end(),
                       [](const Certificate& s) { return s.status == Status::Refuted; }) &&
           c.status == Status::Refuted;
  }
  if (reason == "root-of-unity") {
    const auto m = c.evidence.at("m").get<std::uint64_t>();
    return c.status == Status::Refuted && m >= 3 && exactalg::gcd(c.polynomial, x_power_minus_one(m)).degree() > 0;
  }
  return reason == "component-inconclusive" && c.status == Status::Inconclusive;
}

}  // namespace

bool verify_certificate(const Certificate& c) {
  try {
    if (c.polynomial.degree() < 1 || c.subject != polynomial_hash(c.polynomial)) return false;
    switch (c.kind) {
      case CertificateKind::PurelyImaginary:
      case CertificateKind::NoRealRoots: {
        const auto summary = exactalg::sturm_summary(c.polynomial);
        if (summary != c.evidence.at("sturm")) return false;
        const bool free = summary["real_roots"].get<long>() == 0 && c.polynomial.degree() % 2 == 0;
        if (c.evidence.contains("real_root_threshold")) {
          const auto& t = c.evidence.at("real_root_threshold");
          const auto q = families::AdmissibleQuadruple::from_json(t.at("quadruple"));
          if (families::quadruple_polynomial(q) != c.polynomial) return false;
          if (real_root_threshold_record(q) != t) return false;
        }
        return (c.status == Status::Certified) == free && c.status != Status::Inconclusive;
      }
      case CertificateKind::Irreducible: return verify_irreducible(c);
      case CertificateKind::Primitive: return verify_primitive(c);
      case CertificateKind::NoProperSubfield:
        return c.certified() && c.components.size() == 2 && c.components[0].kind == CertificateKind::Irreducible &&
               c.components[1].kind == CertificateKind::Primitive && c.components[0].certified() &&
               c.components[1].certified() && components_consistent(c);
      case CertificateKind::TorsionUnits: {
        if (c.components.size() != 1 || c.components[0].kind != CertificateKind::NoProperSubfield ||
            !c.components[0].certified() || !components_consistent(c)) {
          return false;
        }
        bool trivial = true;
        nlohmann::json checked = nlohmann::json::array();
        for (auto m : cyclotomic_indices(static_cast<std::uint64_t>(c.polynomial.degree()))) {
          checked.push_back(m);
          if (exactalg::gcd(c.polynomial, x_power_minus_one(m)).degree() > 0) trivial = false;
        }
        return checked == c.evidence.at("sanity_indices") && trivial == c.evidence.at("sanity_gcds_trivial").get<bool>() &&
               (c.status == Status::Certified) == trivial;
      }
      case CertificateKind::SpecialTorus: return verify_special(c);
      case CertificateKind::CycleTypeWitness: {
        const auto& w = c.evidence.at("witness");
        return c.certified() && pattern_matches(c.polynomial, w);
      }
      case CertificateKind::DoublyTransitive: return false;
    }
  } catch (const Error&) {
    return false;
  } catch (const nlohmann::json::exception&) {
    return false;
  }
  return false;
}

}  // namespace torusforge::certify
