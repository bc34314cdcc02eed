#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "torusforge/error.hpp"
#include "torusforge/exactalg/number_theory.hpp"
#include "torusforge/exactalg/resultant.hpp"
#include "torusforge/exactalg/sturm.hpp"
#include "torusforge/families/families.hpp"

using namespace torusforge;
using namespace torusforge::exactalg;
using namespace torusforge::families;

namespace {

// x^(2g) - b x - K is real-root-free iff its value at the unique critical
// point beta = (b/2g)^(1/(2g-1)) is positive.
long double value_at_critical_point(long g, long l, long p, long b, long c) {
  const long double beta = std::pow(static_cast<long double>(b) / (2 * g), 1.0L / (2 * g - 1));
  const long double k = static_cast<long double>(p) * c / std::pow(static_cast<long double>(l), static_cast<long double>(l));
  return std::pow(beta, 2 * g) - b * beta - k;
}

long oracle_max_c(long g, long l, long p, long b) {
  long c = 0;
  while (value_at_critical_point(g, l, p, b, c) <= 0) --c;
  return c;
}

std::vector<AdmissibleQuadruple> oracle_head(long g, long max_p, long max_b) {
  std::vector<AdmissibleQuadruple> out;
  std::vector<long> ls;
  for (long q = 2; q <= 2 * g - 1; ++q)
    if ((2 * g - 1) % q == 0 && is_prime(Integer(q))) ls.push_back(q);
  for (long p = 2; p < max_p; ++p) {
    if (!is_prime(Integer(p)) || p % (2 * g - 1) != 1) continue;
    for (long b = 1; b <= max_b; ++b) {
      if (b % p == 0 || oracle::multiplicative_order(static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(p)) != static_cast<std::uint64_t>(p - 1)) continue;
      for (long l : ls) {
        if (b % l == 0) continue;
        long c = oracle_max_c(g, l, p, b);
        while (c % l == 0) --c;
        out.push_back({g, l, p, Integer(b), Integer(c)});
      }
    }
  }
  return out;
}

}  // namespace

TEST(TruncatedExponential, Coefficients) {
  EXPECT_EQ(truncated_exponential(1), RatPolynomial({Rational(1), Rational(1)}));
  EXPECT_EQ(truncated_exponential(2), RatPolynomial({Rational(1), Rational(1), Rational(1, 2)}));
  EXPECT_EQ(truncated_exponential(4),
            RatPolynomial({Rational(1), Rational(1), Rational(1, 2), Rational(1, 6), Rational(1, 24)}));
  EXPECT_EQ(scaled_truncated_exponential(4), IntPolynomial({24, 24, 12, 4, 1}));
  EXPECT_EQ(to_rational(scaled_truncated_exponential(6)), Rational(720) * truncated_exponential(6));
  EXPECT_THROW(truncated_exponential(0), Error);
}

TEST(TruncatedExponential, EvenDegreesHaveNoRealRoots) {
  for (long k = 1; k <= 6; ++k) EXPECT_EQ(sturm_count(truncated_exponential(2 * k)), 0) << k;
  for (long k = 0; k <= 5; ++k) EXPECT_EQ(sturm_count(truncated_exponential(2 * k + 1)), 1) << k;
}

TEST(Selmer, ShapeAndUnsupportedGenus) {
  EXPECT_EQ(selmer(2), IntPolynomial({1, 1, 0, 0, 1}));
  EXPECT_EQ(selmer(3), IntPolynomial({1, 1, 0, 0, 0, 0, 1}));
  try {
    selmer(4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedParameter);
  }
  EXPECT_THROW(selmer(1), Error);
}

TEST(Selmer, PositiveOnRationalGrid) {
  for (long g : {2, 3, 5, 6}) {
    auto f = to_rational(selmer(g));
    for (long num = -60; num <= 60; ++num) {
      Rational a(num, 16);
      a.canonicalize();
      Rational v = f.evaluate(a);
      if (abs(a) >= 1) {
        EXPECT_GE(v, 1) << g << " " << a;
      } else {
        EXPECT_GT(v, 0) << g << " " << a;
      }
    }
    EXPECT_EQ(sturm_count(f), 0);
  }
}

TEST(Quadruple, PolynomialAndValidation) {
  AdmissibleQuadruple q{2, 3, 7, 5, -16};
  EXPECT_EQ(quadruple_polynomial(q),
            RatPolynomial({Rational(112, 27), Rational(-5), Rational(0), Rational(0), Rational(1)}));
  auto expect_invalid = [](AdmissibleQuadruple bad, const std::string& predicate) {
    try {
      quadruple_polynomial(bad);
      FAIL() << predicate;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidQuadruple);
      EXPECT_NE(std::string(e.what()).find(predicate), std::string::npos) << e.what();
    }
  };
  expect_invalid({2, 3, 7, 6, -16}, "l does not divide b");
  expect_invalid({2, 3, 7, 5, -15}, "l does not divide c");
  expect_invalid({2, 3, 11, 2, -16}, "p = 1 mod 2g-1");
  expect_invalid({2, 3, 7, 2, -16}, "primitive root");
  expect_invalid({2, 5, 7, 5, -16}, "l divides 2g-1");
  EXPECT_EQ(AdmissibleQuadruple::from_json(q.to_json()), q);
}

TEST(Quadruple, DiscriminantOfFirstMember) {
  auto f = quadruple_polynomial({2, 3, 7, 5, -16});
  Rational d = discriminant(f);
  EXPECT_EQ(d, Rational(27510943, 19683));
  EXPECT_EQ(valuation(d, 3), -9);
  // Root-product oracle in long double.
  auto r = oracle::complex_roots({112.0L / 27, -5, 0, 0, 1});
  std::complex<long double> prod(1, 0);
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j) prod *= (r[i] - r[j]) * (r[i] - r[j]);
  EXPECT_NEAR(static_cast<double>(prod.real()), d.get_d(), 1e-6 * d.get_d());
}

TEST(MaxC, MatchesCriticalValueOracle) {
  auto t = max_c_without_real_roots(2, 3, 7, 5);
  EXPECT_EQ(t.max_c, -16);
  EXPECT_EQ(t.max_c, oracle_max_c(2, 3, 7, 5));
  EXPECT_NEAR(t.threshold_minus_b, -15.58, 0.01);
  EXPECT_NEAR(t.threshold_minus_1, 1.0386, 0.001);
  EXPECT_EQ(sturm_count(quadruple_polynomial_unchecked(2, 3, 7, 5, Integer(-16))), 0);
  EXPECT_GT(sturm_count(quadruple_polynomial_unchecked(2, 3, 7, 5, Integer(-15))), 0);
  for (long g : {2, 3}) {
    const long l = g == 2 ? 3 : 5;
    for (long p : {7L, 11L, 13L, 31L}) {
      if (p % (2 * g - 1) != 1) continue;
      for (long b = 1; b <= 40; ++b) {
        auto r = max_c_without_real_roots(g, l, p, Integer(b));
        EXPECT_EQ(r.max_c, oracle_max_c(g, l, p, b)) << g << " " << p << " " << b;
        // Corrected closed form: max_c is the largest integer strictly below it.
        EXPECT_LT(r.max_c.get_d(), r.threshold_minus_b);
        EXPECT_GE(r.max_c.get_d() + 1, r.threshold_minus_b);
      }
    }
  }
}

TEST(AdjustC, Examples) {
  QuadrupleContext ctx{2, 3, 7, 5};
  Integer c1 = adjust_c(1, ctx);
  EXPECT_EQ((Integer(1) - c1) % 21, 0);
  EXPECT_EQ(sturm_count(quadruple_polynomial_unchecked(2, 3, 7, 5, c1)), 0);
  EXPECT_GT(sturm_count(quadruple_polynomial_unchecked(2, 3, 7, 5, c1 + 21)), 0);
  EXPECT_EQ(c1, -20);

  Integer c2 = adjust_c(5, ctx, 5);
  EXPECT_EQ((Integer(5) - c2) % 525, 0);
  EXPECT_EQ(sturm_count(quadruple_polynomial_unchecked(2, 3, 7, 5, c2)), 0);
  EXPECT_EQ(c2, -520);

  EXPECT_EQ(adjust_c(-16, ctx), -16);
  EXPECT_EQ(adjust_c(-100, ctx), -100);
  EXPECT_THROW(adjust_c(3, ctx), Error);
  EXPECT_THROW(adjust_c(1, ctx, 7), Error);
}

TEST(AdjustC, PreservesResidues) {
  for (long c = -50; c <= 50; ++c) {
    if (c % 3 == 0) continue;
    QuadrupleContext ctx{2, 3, 7, 5};
    Integer out = adjust_c(c, ctx);
    EXPECT_EQ((Integer(c) - out) % 21, 0);
    EXPECT_LE(out, Integer(c));
    Integer with_ell = adjust_c(c, ctx, 11);
    EXPECT_EQ((Integer(c) - with_ell) % (21 * 121), 0);
    EXPECT_EQ(sturm_count(quadruple_polynomial_unchecked(2, 3, 7, 5, with_ell)), 0);
  }
}

TEST(Enumerate, HeadMatchesExhaustiveSearch) {
  auto got = enumerate_quadruples(2, {40, 12, 1, 1000});
  auto expected = oracle_head(2, 40, 12);
  ASSERT_FALSE(got.empty());
  EXPECT_EQ(got, expected);
  EXPECT_EQ(got.front(), (AdmissibleQuadruple{2, 3, 7, 5, -16}));
}

TEST(Enumerate, GenusThreeStartsAtElevenAndEmptyBudget) {
  auto g3 = enumerate_quadruples(3, {40, 20, 1, 3});
  ASSERT_EQ(g3.size(), 3u);
  EXPECT_EQ(g3.front().l, 5);
  EXPECT_EQ(g3.front().p, 11);
  EXPECT_TRUE(enumerate_quadruples(2, {7, 50, 1, 100}).empty());
  EXPECT_EQ(enumerate_quadruples(2, {8, 50, 1, 100}).front().p, 7);
  EXPECT_TRUE(enumerate_quadruples(2, {100, 50, 0, 100}).empty());
}

TEST(Enumerate, EveryItemIsAdmissibleAndRealRootFree) {
  for (long g : {2, 3, 5}) {
    auto items = enumerate_quadruples(g, {120, 30, 2, 40});
    EXPECT_FALSE(items.empty());
    for (const auto& q : items) {
      auto f = quadruple_polynomial(q);
      EXPECT_EQ(sturm_count(f), 0);
    }
    for (std::size_t i = 1; i < items.size(); ++i) {
      const auto& a = items[i - 1];
      const auto& b = items[i];
      EXPECT_TRUE(a.p < b.p || (a.p == b.p && (a.b < b.b || (a.b == b.b && (a.l < b.l || (a.l == b.l && a.c > b.c))))));
    }
  }
}

TEST(FamilySpecTest, JsonAndPolynomial) {
  FamilySpec s{FamilyKind::Quadruple, 2, AdmissibleQuadruple{2, 3, 7, 5, -16}};
  auto j = s.to_json();
  EXPECT_EQ(j, nlohmann::json::parse(R"({"kind":"quadruple","g":2,"quadruple":[3,7,"5","-16"]})"));
  auto back = FamilySpec::from_json(j);
  EXPECT_EQ(back.polynomial(), s.polynomial());
  FamilySpec e{FamilyKind::TruncatedExponential, 3, std::nullopt};
  EXPECT_EQ(e.polynomial(), truncated_exponential(6));
  EXPECT_THROW(family_kind_from_string("bogus"), Error);
}
