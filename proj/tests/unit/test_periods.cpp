#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "torusforge/error.hpp"
#include "torusforge/families/families.hpp"
#include "torusforge/periods/periods.hpp"

using namespace torusforge;
using namespace torusforge::exactalg;
using namespace torusforge::periods;

namespace {

RatPolynomial poly(std::initializer_list<long> c) {
  std::vector<Rational> v;
  for (long x : c) v.emplace_back(x);
  return RatPolynomial(std::move(v));
}

const RatPolynomial kSelmer4 = poly({1, 1, 0, 0, 1});
const RatPolynomial kQuad = RatPolynomial({Rational(112, 27), Rational(-5), Rational(0), Rational(0), Rational(1)});

std::vector<long double> as_long_double(const RatPolynomial& f) {
  std::vector<long double> out;
  for (const auto& c : f.coefficients()) out.push_back(static_cast<long double>(c.get_d()));
  return out;
}

double log2_sup(const RealMatrix& m) { return sup_norm(m).log2_abs(); }

}  // namespace

TEST(ComplexRoots, XSquaredPlusOne) {
  auto roots = complex_roots(poly({1, 0, 1}), 128);
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_LT(roots[0].value.im.to_double(), 0);
  EXPECT_GT(roots[1].value.im.to_double(), 0);
  for (const auto& r : roots) {
    EXPECT_LT(r.error_radius.log2_abs(), -60);
    EXPECT_NEAR(std::abs(r.value.im.to_double()), 1.0, 1e-30);
    EXPECT_FALSE(r.is_real);
  }
  EXPECT_EQ(roots[0].conjugate_partner, 1u);
  EXPECT_EQ(roots[1].conjugate_partner, 0u);
}

TEST(ComplexRoots, AllRealCubic) {
  auto roots = complex_roots(poly({0, -1, 0, 1}), 128);
  ASSERT_EQ(roots.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_TRUE(roots[i].is_real);
    EXPECT_EQ(roots[i].conjugate_partner, i);
    EXPECT_NEAR(roots[i].value.re.to_double(), static_cast<double>(i) - 1.0, 1e-30);
  }
}

TEST(ComplexRoots, NotSquarefreeRejected) {
  EXPECT_THROW(complex_roots(poly({1, 2, 1}), 128), Error);
}

TEST(ComplexRoots, AgreesWithDurandKernerOracle) {
  std::vector<RatPolynomial> corpus = {kSelmer4, kQuad, to_rational(families::scaled_truncated_exponential(4)),
                                       to_rational(families::scaled_truncated_exponential(6)), poly({7, -3, 0, 2, 0, 1}),
                                       poly({1, 1, 1, 1, 1, 1, 1})};
  for (const auto& f : corpus) {
    auto ours = complex_roots(f, 192);
    auto theirs = oracle::complex_roots(as_long_double(f));
    ASSERT_EQ(ours.size(), theirs.size());
    for (const auto& r : ours) {
      std::complex<long double> z(r.value.re.to_double(), r.value.im.to_double());
      long double best = 1e9;
      for (const auto& w : theirs) best = std::min(best, std::abs(z - w));
      EXPECT_LT(best, 1e-9L) << to_string(f);
      // Each disk holds a root of f: the residual is tiny relative to the radius scale.
      EXPECT_LT(r.error_radius.log2_abs(), -150);
    }
  }
}

TEST(ComplexRoots, SeedDoesNotChangeOutput) {
  for (const RatPolynomial& f : std::vector<RatPolynomial>{kSelmer4, kQuad, to_rational(families::scaled_truncated_exponential(6))}) {
    auto a = complex_roots(f, 256, 0);
    for (std::uint64_t seed : {1ULL, 17ULL, 123456789ULL}) {
      auto b = complex_roots(f, 256, seed);
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].value.re.to_hex(), b[i].value.re.to_hex());
        EXPECT_EQ(a[i].value.im.to_hex(), b[i].value.im.to_hex());
      }
    }
  }
}

TEST(Companion, QuadruplePolynomialLastColumn) {
  RationalMatrix c = companion_matrix(kQuad);
  ASSERT_EQ(c.rows(), 4u);
  EXPECT_EQ(c(0, 3), Rational(-112, 27));
  EXPECT_EQ(c(1, 3), Rational(5));
  EXPECT_EQ(c(2, 3), Rational(0));
  EXPECT_EQ(c(3, 3), Rational(0));
  EXPECT_EQ(c(1, 0), Rational(1));
  EXPECT_EQ(c(2, 1), Rational(1));
  EXPECT_EQ(c(3, 2), Rational(1));
}

TEST(Companion, SelmerLastColumn) {
  RationalMatrix c = companion_matrix(kSelmer4);
  EXPECT_EQ(c(0, 3), Rational(-1));
  EXPECT_EQ(c(1, 3), Rational(-1));
  EXPECT_EQ(c(2, 3), Rational(0));
  EXPECT_EQ(c(3, 3), Rational(0));
}

TEST(Companion, CharacteristicPolynomialIsMonicF) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> coef(-9, 9), deg(1, 7), den(1, 5);
  for (int trial = 0; trial < 60; ++trial) {
    long n = deg(rng);
    std::vector<Rational> v;
    for (long i = 0; i < n; ++i) v.emplace_back(coef(rng), den(rng));
    long lead = coef(rng);
    if (lead == 0) lead = 3;
    v.emplace_back(lead);
    for (auto& q : v) q.canonicalize();
    RatPolynomial f(v);
    EXPECT_EQ(characteristic_polynomial(companion_matrix(f)), monic(f)) << to_string(f);
  }
}

TEST(PeriodLattice, GenusOneGaussian) {
  PeriodLattice l = build_period_lattice(poly({1, 0, 1}), 128);
  EXPECT_EQ(l.g, 1);
  RealMatrix j0 = standard_complex_structure(1, l.working_bits);
  EXPECT_LT(log2_sup(l.j - j0), -128);
  EXPECT_EQ(l.j(0, 0).round_to_integer(), 0);
  EXPECT_EQ(l.j(0, 1).round_to_integer(), -1);
  EXPECT_EQ(l.j(1, 0).round_to_integer(), 1);
  EXPECT_EQ(l.j(1, 1).round_to_integer(), 0);
}

TEST(PeriodLattice, SelmerResidualsShrinkWithPrecision) {
  for (long p : {256L, 512L}) {
    PeriodLattice l = build_period_lattice(kSelmer4, p);
    EXPECT_LT(l.j_square_residual_log2, -p / 2.0);
    EXPECT_LT(l.commutator_residual_log2, -p / 2.0);
    // At twice the precision the residuals pass the tighter bound too.
    PeriodLattice d = build_period_lattice(kSelmer4, 2 * p);
    EXPECT_LT(d.j_square_residual_log2, -static_cast<double>(p));
    EXPECT_LT(d.commutator_residual_log2, -static_cast<double>(p));
    EXPECT_GE(l.working_bits, p + 64);
  }
}

TEST(PeriodLattice, QuadruplePolynomial) {
  PeriodLattice l = build_period_lattice(kQuad, 256);
  EXPECT_EQ(l.g, 2);
  EXPECT_EQ(l.leading_coefficient, Rational(1));
  EXPECT_LT(l.j_square_residual_log2, -128);
  EXPECT_LT(l.commutator_residual_log2, -128);
  EXPECT_EQ(characteristic_polynomial(l.companion), kQuad);
}

TEST(PeriodLattice, NonMonicUsesMonicNormalization) {
  RatPolynomial f = Rational(3) * kSelmer4;
  PeriodLattice l = build_period_lattice(f, 128);
  EXPECT_EQ(l.leading_coefficient, Rational(3));
  EXPECT_EQ(l.companion, companion_matrix(kSelmer4));
  PeriodLattice m = build_period_lattice(kSelmer4, 128);
  EXPECT_LT(log2_sup(l.j - m.j), -100);
}

TEST(PeriodLattice, EveryEmbeddingCommutesWithC) {
  for (unsigned long mask = 0; mask < 4; ++mask) {
    PeriodLattice l = build_period_lattice(kSelmer4, 256, mask);
    EXPECT_LT(l.commutator_residual_log2, -128) << mask;
    EXPECT_LT(l.j_square_residual_log2, -128) << mask;
  }
  PeriodLattice a = build_period_lattice(kSelmer4, 256, 0);
  PeriodLattice b = build_period_lattice(kSelmer4, 256, 1);
  EXPECT_GT(log2_sup(a.j - b.j), -10);
  EXPECT_THROW(build_period_lattice(kSelmer4, 256, 4), Error);
}

TEST(PeriodLattice, EmbeddingRootsAreEigenvaluesOfC) {
  // Row vector w = (1, z, ..., z^(n-1)) satisfies w C = z w exactly when f(z) = 0.
  for (const RatPolynomial& f : std::vector<RatPolynomial>{kSelmer4, kQuad, to_rational(families::scaled_truncated_exponential(6))}) {
    PeriodLattice l = build_period_lattice(f, 256);
    const std::size_t n = l.companion.rows();
    RealMatrix c = to_real(l.companion, l.working_bits);
    for (const auto& z : l.embedding) {
      std::vector<Complex> w;
      Complex power(Real(1L, l.working_bits), Real(l.working_bits));
      for (std::size_t k = 0; k < n; ++k) {
        w.push_back(power);
        power = power * z;
      }
      for (std::size_t col = 0; col < n; ++col) {
        Complex acc(l.working_bits);
        for (std::size_t k = 0; k < n; ++k) acc = acc + c(k, col) * w[k];
        Complex diff = acc - z * w[col];
        EXPECT_LT(diff.abs().log2_abs(), -200) << to_string(f);
      }
    }
  }
}

TEST(PeriodLattice, RealRootsAreADependencyError) {
  try {
    build_period_lattice(poly({-2, 0, 0, 0, 1}), 128);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Dependency);
  }
  EXPECT_NO_THROW(build_period_lattice(poly({1, 1, 1}), 128));
}

TEST(PeriodLattice, OddDegreeRejected) {
  EXPECT_THROW(build_period_lattice(poly({1, 0, 1, 1}), 128), Error);
}

TEST(PeriodLattice, RationalBasisIsExact) {
  PeriodLattice l = lattice_from_rational_basis(identity_rational(4), 128);
  EXPECT_EQ(l.g, 2);
  EXPECT_TRUE(std::isinf(l.j_square_residual_log2));
  EXPECT_TRUE(l.j == standard_complex_structure(2, l.working_bits));

  RationalMatrix s = identity_rational(2);
  s(0, 1) = Rational(1, 2);
  s(1, 1) = Rational(3);
  PeriodLattice t = lattice_from_rational_basis(s, 128);
  EXPECT_TRUE(std::isinf(t.j_square_residual_log2));
}

TEST(PeriodLattice, RandomBasisHasConsistentPrefix) {
  PeriodLattice a = random_period_lattice(2, 42, 128);
  PeriodLattice b = random_period_lattice(2, 42, 256);
  RealMatrix a_hi = to_real(identity_rational(4), b.working_bits) * a.basis;
  EXPECT_LT(log2_sup(b.basis - a_hi), -static_cast<double>(a.working_bits) + 2);
  EXPECT_LT(log2_sup(b.j - a.j), -100);
  EXPECT_LT(b.j_square_residual_log2, -128);
  PeriodLattice c = random_period_lattice(2, 43, 128);
  EXPECT_GT(log2_sup(c.basis - a.basis), -10);
}

TEST(PeriodLattice, RebuildFollowsSource) {
  PeriodLattice l = build_period_lattice(kSelmer4, 128, 1);
  PeriodLattice r = rebuild(l.source, 256);
  EXPECT_EQ(r.precision, 256);
  EXPECT_EQ(r.source.embedding_bitmask, 1u);
  EXPECT_LT(log2_sup(r.j - l.j), -120);
}

TEST(PeriodLattice, JsonUsesHexReals) {
  PeriodLattice l = build_period_lattice(kSelmer4, 128);
  auto j = l.to_json();
  EXPECT_EQ(j["g"], 2);
  EXPECT_EQ(j["source"]["kind"], "polynomial");
  EXPECT_EQ(j["roots"].size(), 4u);
  std::string entry = j["j"][0][0].get<std::string>();
  EXPECT_NE(entry.find("0x"), std::string::npos);
  EXPECT_EQ(j["companion"][0][3], "-1");
}
