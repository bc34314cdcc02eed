#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "oracles.hpp"
#include "torusforge/error.hpp"
#include "torusforge/exactalg/matrix.hpp"
#include "torusforge/exactalg/number_theory.hpp"
#include "torusforge/exactalg/resultant.hpp"
#include "torusforge/exactalg/sturm.hpp"

#include <set>
#include "torusforge/isogeny/isogeny.hpp"

using namespace torusforge;
using namespace torusforge::exactalg;
using namespace torusforge::isogeny;
using families::AdmissibleQuadruple;

namespace {

const AdmissibleQuadruple kHead{2, 3, 7, 5, -16};

// Oracle: discriminant through the Sylvester determinant of f and f'.
Rational sylvester_discriminant(const RatPolynomial& f) {
  RatPolynomial d = f.derivative();
  const long n = f.degree(), m = d.degree();
  const std::size_t size = static_cast<std::size_t>(n + m);
  RationalMatrix s(size, size, Rational(0));
  for (long r = 0; r < m; ++r)
    for (long k = 0; k <= n; ++k) s(r, r + k) = f[static_cast<std::size_t>(n - k)];
  for (long r = 0; r < n; ++r)
    for (long k = 0; k <= m; ++k) s(m + r, r + k) = d[static_cast<std::size_t>(m - k)];
  Rational res = determinant(s);
  Rational sign = (n * (n - 1) / 2) % 2 == 0 ? Rational(1) : Rational(-1);
  Rational out = sign * res / f.leading();
  out.canonicalize();
  return out;
}

oracle::Fp reduce_mod(const RatPolynomial& f, long p) {
  oracle::Fp out;
  for (const auto& c : f.coefficients()) {
    Integer num = c.get_num() % p, den = c.get_den() % p;
    if (num < 0) num += p;
    if (den < 0) den += p;
    Integer inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), Integer(p).get_mpz_t());
    out.push_back(static_cast<long>(Integer((num * inv) % p).get_si()));
  }
  oracle::trim(out);
  return out;
}

bool oracle_repeated_factor(const RatPolynomial& f, long p) {
  bool repeated = false;
  oracle::factor_degrees(reduce_mod(f, p), p, &repeated);
  return repeated;
}

AdmissibleQuadruple random_quadruple(std::mt19937_64& rng, long g) {
  const long l = g == 2 ? 3 : g == 3 ? 5 : 7;
  std::vector<long> primes;
  for (long p = 3; p < 120; ++p)
    if (is_prime(Integer(p)) && p % (2 * g - 1) == 1) primes.push_back(p);
  std::uniform_int_distribution<std::size_t> pick(0, primes.size() - 1);
  std::uniform_int_distribution<long> small(-60, 60);
  while (true) {
    long p = primes[pick(rng)];
    Integer b = small(rng), c = small(rng);
    if (b == 0 || c == 0) continue;
    AdmissibleQuadruple q{g, l, p, b, c};
    try {
      q.validate();
      return q;
    } catch (const Error&) {
    }
  }
}

LedgerEntry synthetic_entry(std::map<long, DivisibilityMethod> div, std::map<long, DivisibilityMethod> nondiv) {
  LedgerEntry e;
  e.quadruple = kHead;
  e.facts.divisible_primes = std::move(div);
  e.facts.nondivisible_primes = std::move(nondiv);
  return e;
}

}  // namespace

TEST(TrinomialDiscriminant, SelmerQuartic) {
  EXPECT_EQ(trinomial_discriminant(4, Rational(1), Rational(1)), Rational(229));
  EXPECT_EQ(sylvester_discriminant(RatPolynomial({Rational(1), Rational(1), Rational(0), Rational(0), Rational(1)})),
            Rational(229));
}

TEST(TrinomialDiscriminant, HeadQuadruple) {
  Rational d = trinomial_discriminant(kHead);
  EXPECT_EQ(d, Rational(27510943, 19683));
  EXPECT_EQ(valuation(d, Integer(3)), -9);
  // No real roots and degree 4: the sign is positive.
  EXPECT_GT(d, 0);
  EXPECT_EQ(d, sylvester_discriminant(families::quadruple_polynomial(kHead)));
}

TEST(TrinomialDiscriminant, ClosedFormMatchesSylvesterOnRandomQuadruples) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const long g = 2 + trial % 3;
    AdmissibleQuadruple q = random_quadruple(rng, g);
    Rational closed = trinomial_discriminant(q);
    EXPECT_EQ(closed, sylvester_discriminant(families::quadruple_polynomial(q))) << q.to_json().dump();
    EXPECT_EQ(closed, discriminant(families::quadruple_polynomial(q)));
  }
}

TEST(TrinomialDiscriminant, RamifiedReductionAtFive) {
  AdmissibleQuadruple q{2, 3, 7, 5, -20};
  oracle::Fp fbar = reduce_mod(families::quadruple_polynomial(q), 5);
  EXPECT_EQ(fbar, (oracle::Fp{0, 0, 0, 0, 1}));
}

TEST(Divisibility, EllDividingBIsDivisible) {
  DivisibilityResult r = field_disc_divisibility({2, 3, 7, 5, -20}, 5);
  EXPECT_EQ(r.status, Divisibility::Divisible);
  EXPECT_EQ(r.method, DivisibilityMethod::LemmaV);
}

TEST(Divisibility, EllDividingCIsNotDivisible) {
  AdmissibleQuadruple q{2, 3, 7, 17, -25};
  q.validate();
  DivisibilityResult r = field_disc_divisibility(q, 5);
  EXPECT_EQ(r.status, Divisibility::NotDivisible);
  EXPECT_EQ(r.method, DivisibilityMethod::LemmaVI);
}

TEST(Divisibility, DedekindAgreesWithOracle) {
  DivisibilityResult r = field_disc_divisibility(kHead, 11);
  EXPECT_FALSE(oracle_repeated_factor(families::quadruple_polynomial(kHead), 11));
  EXPECT_EQ(r.status, Divisibility::NotDivisible);
  EXPECT_EQ(r.method, DivisibilityMethod::DedekindTest);
  for (long ell : {2L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L}) {
    DivisibilityResult s = field_disc_divisibility(kHead, ell);
    if (s.method == DivisibilityMethod::DedekindTest)
      EXPECT_FALSE(oracle_repeated_factor(families::quadruple_polynomial(kHead), ell)) << ell;
    if (s.status == Divisibility::Indeterminate)
      EXPECT_TRUE(oracle_repeated_factor(families::quadruple_polynomial(kHead), ell)) << ell;
  }
}

TEST(Divisibility, EllEqualToLIsUnsupported) {
  try {
    field_disc_divisibility(kHead, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unsupported);
  }
  EXPECT_THROW(field_disc_divisibility(kHead, 9), Error);
}

TEST(Divisibility, EllDividingBCasesHaveRepeatedFactor) {
  std::mt19937_64 rng(99);
  int checked = 0;
  for (long g : {2L, 3L}) {
    const long l = g == 2 ? 3 : 5;
    for (long p = 3; p < 80; ++p) {
      if (!is_prime(Integer(p)) || p % (2 * g - 1) != 1) continue;
      for (long ell : {5L, 11L, 13L, 17L}) {
        if (ell == l || ell == p || g % ell == 0) continue;
        for (long t = 1; t < 15; ++t) {
          Integer b = Integer(ell) * t;
          if (b % l == 0 || b % p == 0 || !primitive_root_check(b, static_cast<std::uint64_t>(p))) continue;
          Integer c = Integer(ell) - Integer(ell * ell) * static_cast<long>(rng() % 5);
          if (c % l == 0) continue;
          AdmissibleQuadruple q{g, l, p, b, c};
          DivisibilityResult r = field_disc_divisibility(q, ell);
          ASSERT_EQ(r.status, Divisibility::Divisible);
          EXPECT_TRUE(oracle_repeated_factor(families::quadruple_polynomial(q), ell)) << q.to_json().dump();
          ++checked;
          break;
        }
      }
    }
  }
  EXPECT_GT(checked, 10);
}

TEST(Facts, RecordAndDisjoint) {
  DiscriminantFacts f = discriminant_facts({2, 3, 7, 5, -20});
  EXPECT_EQ(f.closed_form, f.resultant);
  for (long ell : {5L, 11L, 13L, 17L}) f.record(ell);
  EXPECT_TRUE(f.divisible_primes.count(5));
  for (const auto& [p, m] : f.divisible_primes) EXPECT_FALSE(f.nondivisible_primes.count(p));
  DiscriminantFacts back = DiscriminantFacts::from_json(f.to_json());
  EXPECT_EQ(back.to_json(), f.to_json());
}

TEST(Witness, LeastDistinguishingPrime) {
  LedgerEntry a = synthetic_entry({{5, DivisibilityMethod::LemmaV}, {11, DivisibilityMethod::LemmaV}}, {});
  LedgerEntry b =
      synthetic_entry({}, {{5, DivisibilityMethod::DedekindTest}, {11, DivisibilityMethod::DedekindTest}});
  EXPECT_EQ(non_isogeny_witness(a, b), 5);
  EXPECT_EQ(non_isogeny_witness(b, a), 5);
  EXPECT_FALSE(non_isogeny_witness(a, a).has_value());
}

TEST(Family, SeedRejectsMismatchedLedger) {
  FamilyLedger ledger = seed_ledger(kHead);
  FamilyLedger bad = ledger;
  LedgerEntry other = bad.entries.front();
  other.quadruple.p = 13;
  bad.entries.push_back(other);
  try {
    extend_family(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidLedger);
  }
  try {
    extend_family(FamilyLedger{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidLedger);
  }
}

TEST(Family, FirstExtensionUsesFive) {
  FamilyLedger one = extend_family(seed_ledger(kHead));
  ASSERT_EQ(one.entries.size(), 2u);
  const LedgerEntry& e = one.entries.back();
  EXPECT_EQ(e.witness, 5);
  EXPECT_EQ(e.quadruple.b, 5);
  EXPECT_EQ(e.quadruple.c, -20);
  EXPECT_TRUE(e.certificate.certified());
  EXPECT_EQ(e.certificate.kind, certify::CertificateKind::SpecialTorus);
  EXPECT_EQ(non_isogeny_witness(one.entries[0], one.entries[1]), 5);
  EXPECT_EQ(one.entries[0].facts.nondivisible_primes.count(5), 1u);
}

TEST(Family, RepeatedExtensionIsPairwiseDistinguished) {
  FamilyLedger ledger = seed_ledger(kHead);
  for (int k = 0; k < 3; ++k) ledger = extend_family(ledger);
  ASSERT_EQ(ledger.entries.size(), 4u);
  std::set<long> witnesses;
  for (std::size_t k = 1; k < ledger.entries.size(); ++k) {
    const auto& e = ledger.entries[k];
    ASSERT_TRUE(e.witness);
    witnesses.insert(*e.witness);
    const Integer ell(*e.witness);
    EXPECT_EQ(e.quadruple.b % ell, 0);
    Integer r = e.quadruple.c % (ell * ell);
    if (r < 0) r += ell * ell;
    EXPECT_EQ(r, ell);
    EXPECT_NE(e.quadruple.c % 3, 0);
    EXPECT_TRUE(primitive_root_check(e.quadruple.b, 7));
    EXPECT_TRUE(e.certificate.certified());
    EXPECT_EQ(sturm_count(families::quadruple_polynomial(e.quadruple)), 0);
    // Divisible for entry k, certified not divisible for every earlier one.
    EXPECT_EQ(field_disc_divisibility(e.quadruple, *e.witness).status, Divisibility::Divisible);
    for (std::size_t i = 0; i < k; ++i)
      EXPECT_EQ(field_disc_divisibility(ledger.entries[i].quadruple, *e.witness).status, Divisibility::NotDivisible);
  }
  EXPECT_EQ(witnesses.size(), 3u);
  EXPECT_EQ(ledger.entries[2].witness, 11);
  EXPECT_EQ(ledger.entries[2].quadruple.b, 110);
  auto m = witness_matrix(ledger);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) EXPECT_TRUE(m[i][j].has_value()) << i << "," << j;
}

TEST(Family, LedgerJsonRoundTripAndTamper) {
  FamilyLedger ledger = extend_family(seed_ledger(kHead));
  nlohmann::json j = ledger.to_json();
  FamilyLedger back = FamilyLedger::from_json(j);
  EXPECT_EQ(back.to_json(), j);

  nlohmann::json tampered = j;
  tampered["entries"][1]["witness"] = 11;
  EXPECT_THROW(FamilyLedger::from_json(tampered), Error);

  nlohmann::json bad_hash = j;
  bad_hash["entries"][0]["certificate_hash"] = "00";
  try {
    FamilyLedger::from_json(bad_hash);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidLedger);
  }

  nlohmann::json bad_facts = j;
  bad_facts["entries"][0]["discriminant"]["divisible_primes"]["13"] = "dedekind";
  EXPECT_THROW(FamilyLedger::from_json(bad_facts), Error);
}

TEST(Family, BudgetExhaustionIsNoExtension) {
  ExtensionBudget tiny;
  tiny.max_ell = 5;
  try {
    extend_family(seed_ledger(kHead), tiny);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoExtension);
    EXPECT_NE(std::string(e.what()).find("prime"), std::string::npos);
  }
}
