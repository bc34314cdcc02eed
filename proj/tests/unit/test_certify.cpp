#include <gtest/gtest.h>

#include "galois_oracle.hpp"
#include "oracles.hpp"
#include "torusforge/certify/certify.hpp"
#include "torusforge/error.hpp"
#include "torusforge/exactalg/number_theory.hpp"
#include "torusforge/exactalg/resultant.hpp"
#include "torusforge/families/families.hpp"

using namespace torusforge;
using namespace torusforge::certify;
using namespace torusforge::exactalg;

namespace {

RatPolynomial poly(std::initializer_list<long> c) {
  std::vector<Rational> v;
  for (long x : c) v.emplace_back(x);
  return RatPolynomial(std::move(v));
}

const RatPolynomial kSelmer4 = poly({1, 1, 0, 0, 1});
const RatPolynomial kQuad = RatPolynomial({Rational(112, 27), Rational(-5), Rational(0), Rational(0), Rational(1)});
const RatPolynomial kX4p1 = poly({1, 0, 0, 0, 1});
const RatPolynomial kPhi12 = poly({1, 0, -1, 0, 1});
const RatPolynomial kPhi9 = poly({1, 0, 0, 1, 0, 0, 1});

void expect_roundtrip_verifies(const Certificate& c) {
  EXPECT_TRUE(c.verified) << c.to_json().dump();
  auto back = Certificate::from_json(nlohmann::json::parse(c.to_json().dump()));
  EXPECT_TRUE(verify_certificate(back));
  EXPECT_EQ(back.hash(), c.hash());
}

}  // namespace

TEST(PurelyImaginary, Examples) {
  auto a = certify_purely_imaginary(kSelmer4);
  EXPECT_EQ(a.status, Status::Certified);
  expect_roundtrip_verifies(a);
  EXPECT_EQ(certify_purely_imaginary(kQuad).status, Status::Certified);
  auto r = certify_purely_imaginary(poly({-2, 0, 1}));
  EXPECT_EQ(r.status, Status::Refuted);
  EXPECT_EQ(r.evidence["sturm"]["real_roots"], 2);
  expect_roundtrip_verifies(r);
  auto odd = certify_purely_imaginary(poly({1, 0, 0, 1}));
  EXPECT_EQ(odd.status, Status::Refuted);
  EXPECT_EQ(odd.evidence["reason"], "odd-degree");
}

TEST(Irreducible, Routes) {
  auto ed = certify_irreducible(kQuad);
  EXPECT_EQ(ed.status, Status::Certified);
  EXPECT_EQ(ed.evidence["route"], "eisenstein-dumas");
  EXPECT_EQ(ed.evidence["prime"], "3");
  expect_roundtrip_verifies(ed);

  auto s = certify_irreducible(kSelmer4);
  EXPECT_EQ(s.status, Status::Certified);
  expect_roundtrip_verifies(s);
  // Over F_2 this is irreducible, so the first good prime already decides.
  EXPECT_EQ(s.evidence["route"], "single-prime");

  auto refuted = certify_irreducible(poly({-1, 0, 0, 0, 1}));
  EXPECT_EQ(refuted.status, Status::Refuted);
  EXPECT_EQ(refuted.evidence["route"], "rational-root");
  expect_roundtrip_verifies(refuted);

  auto repeated = certify_irreducible(poly({1, 0, 2, 0, 1}));
  EXPECT_EQ(repeated.status, Status::Refuted);
  EXPECT_EQ(repeated.evidence["route"], "repeated-factor");
}

TEST(Irreducible, PatternIntersectionWithRationalRootTest) {
  // Only {1,3} and {2,2}-type information: {1,3} at 3 alone leaves degrees 1
  // and 3, which the rational-root test removes.
  auto pats = frobenius_scan(kSelmer4, std::vector<std::uint64_t>{3});
  ASSERT_EQ(pats.size(), 1u);
  EXPECT_EQ(pats[0].degrees, (std::vector<long>{1, 3}));
  EXPECT_TRUE(possible_factor_degrees(4, pats, false).empty());
  EXPECT_EQ(possible_factor_degrees(4, pats, true), (std::vector<long>{1, 3}));
  EXPECT_EQ(kSelmer4.evaluate(Rational(1)), 3);
  EXPECT_EQ(kSelmer4.evaluate(Rational(-1)), 1);

  // x^4 + 1 only ever splits as {2,2} or {1,1,1,1}: degree 2 stays possible.
  auto x4 = certify_irreducible(kX4p1, {30});
  EXPECT_EQ(x4.status, Status::Inconclusive);
  EXPECT_EQ(x4.evidence["remaining_degrees"], nlohmann::json::array({2}));
  expect_roundtrip_verifies(x4);
}

TEST(Frobenius, ScanExamples) {
  auto w = frobenius_scan(kSelmer4, std::vector<std::uint64_t>{3, 5});
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w[0].prime, 3u);
  EXPECT_EQ(w[1].prime, 5u);
  EXPECT_EQ(w[0].degrees, oracle::factor_degrees({1, 1, 0, 0, 1}, 3));
  EXPECT_EQ(w[1].degrees, oracle::factor_degrees({1, 1, 0, 0, 1}, 5));
  EXPECT_EQ(w[1].degrees, (std::vector<long>{1, 3}));

  auto q = frobenius_scan(kQuad, std::vector<std::uint64_t>{3, 7});
  ASSERT_EQ(q.size(), 1u);  // 3 divides the denominator
  EXPECT_EQ(q[0].prime, 7u);
  EXPECT_EQ(q[0].degrees, (std::vector<long>{1, 3}));

  // 229 = disc(x^4 + x + 1) is prime, so 229 is always skipped.
  auto skip = frobenius_scan(kSelmer4, std::vector<std::uint64_t>{229});
  EXPECT_TRUE(skip.empty());

  const Rational d = discriminant(kQuad);
  for (const auto& p : frobenius_scan(kQuad, 60)) {
    EXPECT_NE(Integer(d.get_num()) % Integer(p.prime), 0);
    long sum = 0;
    for (long x : p.degrees) sum += x;
    EXPECT_EQ(sum, 4);
  }
}

TEST(Primitive, ExamplesAndDependency) {
  auto irr = certify_irreducible(kSelmer4);
  auto prim = certify_primitive(kSelmer4, irr);
  EXPECT_EQ(prim.status, Status::Certified);
  EXPECT_EQ(prim.evidence["route"], "n-1-cycle");
  EXPECT_EQ(prim.evidence["witness"]["degrees"], nlohmann::json::array({1, 3}));
  EXPECT_EQ(prim.evidence["discriminant_square"], false);
  expect_roundtrip_verifies(prim);

  auto q = certify_primitive(kQuad, certify_irreducible(kQuad));
  EXPECT_EQ(q.status, Status::Certified);

  auto x4 = certify_irreducible(kX4p1);
  try {
    certify_primitive(kX4p1, x4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Dependency);
  }
  try {
    certify_primitive(kQuad, irr);  // certificate for a different polynomial
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Dependency);
  }
}

TEST(Subfields, ChainAndDependencies) {
  auto irr = certify_irreducible(kSelmer4);
  auto prim = certify_primitive(kSelmer4, irr);
  auto nps = certify_no_proper_subfield(irr, prim);
  EXPECT_EQ(nps.status, Status::Certified);
  expect_roundtrip_verifies(nps);
  auto tu = certify_torsion_units(nps);
  EXPECT_EQ(tu.status, Status::Certified);
  EXPECT_EQ(tu.evidence["sanity_indices"], nlohmann::json::array({5, 8, 10, 12}));
  expect_roundtrip_verifies(tu);
  EXPECT_THROW(certify_no_proper_subfield(irr, irr), Error);
  EXPECT_THROW(certify_torsion_units(irr), Error);

  auto quad_exp = certify_irreducible(to_rational(families::scaled_truncated_exponential(4)));
  auto quad_prim = certify_primitive(quad_exp.polynomial, quad_exp, {200});
  EXPECT_EQ(quad_prim.status, Status::Certified);
  EXPECT_EQ(certify_no_proper_subfield(quad_exp, quad_prim).status, Status::Certified);
}

TEST(Special, PositiveFamilies) {
  for (const auto& f : {kSelmer4, kQuad, to_rational(families::scaled_truncated_exponential(4)),
                        to_rational(families::scaled_truncated_exponential(6)), to_rational(families::selmer(3))}) {
    auto s = certify_special(f);
    EXPECT_EQ(s.status, Status::Certified) << to_string(f);
    ASSERT_EQ(s.components.size(), 4u);
    EXPECT_EQ(s.components[0].kind, CertificateKind::Irreducible);
    EXPECT_EQ(s.components[1].kind, CertificateKind::PurelyImaginary);
    EXPECT_EQ(s.components[2].kind, CertificateKind::NoProperSubfield);
    EXPECT_EQ(s.components[3].kind, CertificateKind::TorsionUnits);
    for (const auto& c : s.components) EXPECT_EQ(c.subject, s.subject);
    EXPECT_EQ(s.evidence["g"], f.degree() / 2);
    EXPECT_EQ(s.evidence["conclusions"]["automorphism_group"]["free_rank"], f.degree() / 2 - 1);
    expect_roundtrip_verifies(s);
  }
}

TEST(Special, NegativeControls) {
  for (const auto& [f, m] : std::vector<std::pair<RatPolynomial, int>>{{kX4p1, 8}, {kPhi12, 12}, {kPhi9, 9}}) {
    auto s = certify_special(f);
    EXPECT_EQ(s.status, Status::Refuted) << to_string(f);
    EXPECT_EQ(s.evidence["reason"], "root-of-unity");
    EXPECT_EQ(s.evidence["m"], m);
    expect_roundtrip_verifies(s);
  }
  // Real roots refute directly.
  auto real = certify_special(poly({-1, -1, 0, 0, 1}));
  EXPECT_EQ(real.status, Status::Refuted);
  EXPECT_THROW(certify_special(poly({1, 0, 1})), Error);
  EXPECT_THROW(certify_special(poly({1, 1, 0, 0, 0, 1})), Error);
}

TEST(Verification, DetectsTampering) {
  auto s = certify_special(kSelmer4);
  auto j = s.to_json();
  j["components"][0]["evidence"]["pattern"]["prime"] = 5;
  EXPECT_FALSE(verify_certificate(Certificate::from_json(j)));
  auto j2 = s.to_json();
  j2["subject"] = std::string(64, '0');
  EXPECT_FALSE(verify_certificate(Certificate::from_json(j2)));
  auto j3 = s.to_json();
  j3["polynomial"] = to_json(poly({2, 1, 0, 0, 1}));
  EXPECT_FALSE(verify_certificate(Certificate::from_json(j3)));
}

TEST(Soundness, PrimitivityAgreesWithBruteForceGalois) {
  const auto groups4 = oracle::transitive_two_generated(4);
  const auto groups6 = oracle::transitive_two_generated(6);
  // As sets (not up to conjugacy): three C4, one V4, three D4, A4, S4.
  EXPECT_EQ(groups4.size(), 9u);
  std::multiset<std::size_t> orders;
  for (const auto& g : groups4) orders.insert(g.order);
  EXPECT_EQ(orders, (std::multiset<std::size_t>{4, 4, 4, 4, 8, 8, 8, 12, 24}));
  std::vector<RatPolynomial> corpus{kSelmer4, kQuad, kX4p1, kPhi12, kPhi9,
                                    to_rational(families::scaled_truncated_exponential(4)),
                                    to_rational(families::scaled_truncated_exponential(6)),
                                    to_rational(families::selmer(3)),
                                    poly({2, 0, 0, 0, 1}),        // D4
                                    poly({5, 0, 5, 0, 1}),        // C4
                                    poly({1, 1, 1, 1, 1}),        // C4 (Phi_5)
                                    poly({1, 1, 1, 1, 1, 1, 1}),  // C6 (Phi_7)
                                    poly({2, 0, 0, 0, 0, 0, 1}),  // D6
                                    poly({3, 0, 0, 3, 0, 0, 1}),  // imprimitive
                                    poly({1, -3, 0, 0, 0, 0, 1}),
                                    poly({-7, 1, 0, 1, 0, 0, 1}),
                                    poly({1, 2, 3, 0, 0, 1, 1})};
  std::vector<std::uint64_t> small_primes = primes_below(200);
  for (const auto& f : corpus) {
    auto irr = certify_irreducible(f, {46});
    if (!irr.certified()) continue;
    std::set<std::vector<long>> observed;
    for (const auto& p : frobenius_scan(f, small_primes)) observed.insert(p.degrees);
    const auto& groups = f.degree() == 4 ? groups4 : groups6;
    bool any = false;
    bool all_primitive = true;
    bool all_imprimitive = true;
    for (const auto& g : groups) {
      if (!std::includes(g.cycle_types.begin(), g.cycle_types.end(), observed.begin(), observed.end())) continue;
      any = true;
      all_primitive = all_primitive && g.is_primitive;
      all_imprimitive = all_imprimitive && !g.is_primitive;
    }
    ASSERT_TRUE(any) << to_string(f);
    auto prim = certify_primitive(f, irr, {46});
    if (prim.certified()) EXPECT_TRUE(all_primitive) << to_string(f);
    if (all_imprimitive) EXPECT_NE(prim.status, Status::Certified) << to_string(f);
  }
}

TEST(Special, QuadrupleRecordsRealRootThreshold) {
  const families::AdmissibleQuadruple q{2, 3, 7, 5, -16};
  Certificate c = certify_special(q);
  ASSERT_TRUE(c.certified());
  EXPECT_TRUE(c.verified);
  EXPECT_EQ(c.polynomial, families::quadruple_polynomial(q));
  const Certificate* imaginary = nullptr;
  for (const auto& part : c.components)
    if (part.kind == CertificateKind::PurelyImaginary) imaginary = &part;
  ASSERT_NE(imaginary, nullptr);
  const auto& t = imaginary->evidence.at("real_root_threshold");
  EXPECT_EQ(t["max_c"], "-16");
  EXPECT_FALSE(t["sturm_agrees_with_minus_1"].get<bool>());
  EXPECT_TRUE(t["sturm_agrees_with_minus_b"].get<bool>());
  EXPECT_NEAR(t["threshold_minus_1"].get<double>(), 1.04, 0.01);
  EXPECT_NEAR(t["threshold_minus_b"].get<double>(), -15.58, 0.01);
  // Same bytes after a JSON round trip, and the bundle hash differs from the
  // plain polynomial certificate only through the recorded threshold.
  EXPECT_TRUE(verify_certificate(Certificate::from_json(c.to_json())));
  EXPECT_NE(c.hash(), certify_special(c.polynomial).hash());

  // A forged threshold is rejected.
  nlohmann::json forged = c.to_json();
  for (auto& part : forged["components"])
    if (part["kind"] == "PurelyImaginary") part["evidence"]["real_root_threshold"]["max_c"] = "-15";
  EXPECT_FALSE(verify_certificate(Certificate::from_json(forged)));
  // A record naming another quadruple does not match the polynomial.
  nlohmann::json other = c.to_json();
  for (auto& part : other["components"])
    if (part["kind"] == "PurelyImaginary")
      part["evidence"]["real_root_threshold"] = real_root_threshold_record({2, 3, 7, 5, -17});
  EXPECT_FALSE(verify_certificate(Certificate::from_json(other)));
}
