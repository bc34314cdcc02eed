#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "torusforge/certify/certificate.hpp"
#include "torusforge/certify/certify.hpp"
#include "torusforge/families/families.hpp"

namespace torusforge::isogeny {

using families::AdmissibleQuadruple;

/// disc(x^n + a x + b) = (-1)^(n(n-1)/2) [n^n b^(n-1) + (1-n)^(n-1) a^n].
Rational trinomial_discriminant(long n, const Rational& a, const Rational& b);

/// Discriminant of x^(2g) - b x - p c / l^l from the closed form, checked
/// against the resultant; a mismatch is an internal error.
Rational trinomial_discriminant(const AdmissibleQuadruple& q);

enum class Divisibility { Divisible, NotDivisible, Indeterminate };
enum class DivisibilityMethod { LemmaV, LemmaVI, DedekindTest, None };

std::string to_string(Divisibility d);
std::string to_string(DivisibilityMethod m);

struct DivisibilityResult {
  Divisibility status = Divisibility::Indeterminate;
  DivisibilityMethod method = DivisibilityMethod::None;
};

/// Does ell divide the discriminant of Q[x]/(f_q)?
///  - ell | b, ell coprime to 2glp, c = ell mod ell^2: divisible.
///  - ell | c, ell coprime to (2g-1)pb: not divisible.
///  - f squarefree mod ell: not divisible (Dedekind).
///  - otherwise indeterminate.
/// ell = l is unsupported since f is not ell-integral there.
DivisibilityResult field_disc_divisibility(const AdmissibleQuadruple& q, long ell);

struct DiscriminantFacts {
  AdmissibleQuadruple quadruple;
  Rational closed_form;
  Rational resultant;
  std::map<long, DivisibilityMethod> divisible_primes;
  std::map<long, DivisibilityMethod> nondivisible_primes;

  /// Records the status of ell (indeterminate results are dropped).
  void record(long ell);
  nlohmann::json to_json() const;
  static DiscriminantFacts from_json(const nlohmann::json& j);
};

DiscriminantFacts discriminant_facts(const AdmissibleQuadruple& q);

struct LedgerEntry {
  AdmissibleQuadruple quadruple;
  certify::Certificate certificate;
  DiscriminantFacts facts;
  /// Prime dividing this field's discriminant and no earlier one; absent
  /// for the first entry.
  std::optional<long> witness;
};

struct FamilyLedger {
  std::vector<LedgerEntry> entries;

  long g() const;
  nlohmann::json to_json() const;
  /// Re-checks certificate hashes, the quadruple predicates and the
  /// witness invariant; throws invalid-ledger on any mismatch.
  static FamilyLedger from_json(const nlohmann::json& j);
};

struct ExtensionBudget {
  /// Candidate primes ell are odd primes below this bound.
  long max_ell = 200;
  /// Multiples ell * t of ell tried for b, t <= this.
  long max_b_multiplier = 200;
  /// c values tried per b (stepping down by ell^2, skipping l | c).
  long c_candidates = 4;
  certify::CertifyOptions certify;
};

/// Single-entry ledger; throws dependency unless q is certified special.
FamilyLedger seed_ledger(const AdmissibleQuadruple& q, const certify::CertifyOptions& options = {});

/// Appends a quadruple whose field discriminant is divisible by a fresh
/// prime ell that is certified unramified in every earlier field. Throws
/// invalid-ledger for empty or inconsistent ledgers and no-extension when
/// the budget runs out.
FamilyLedger extend_family(const FamilyLedger& ledger, const ExtensionBudget& budget = {});

/// Least prime certified divisible for one entry and not divisible for the
/// other; absent when none is recorded (inconclusive).
std::optional<long> non_isogeny_witness(const LedgerEntry& a, const LedgerEntry& b);

/// Pairwise witnesses, nullopt on the diagonal and for undistinguished pairs.
std::vector<std::vector<std::optional<long>>> witness_matrix(const FamilyLedger& ledger);

}  // namespace torusforge::isogeny
