#include "torusforge/periods/periods.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "torusforge/error.hpp"
#include "torusforge/exactalg/sturm.hpp"

namespace torusforge::periods {


namespace {

constexpr mpfr_prec_t kAberthBits = 128;

struct Evaluation {
  Complex value;
  Complex derivative;
};

std::vector<Real> real_coefficients(const RatPolynomial& monic_f, mpfr_prec_t bits) {
  std::vector<Real> out;
  for (const auto& c : monic_f.coefficients()) out.emplace_back(c, bits);
  return out;
}

Evaluation evaluate(const std::vector<Real>& coeffs, const Complex& z) {
  mpfr_prec_t bits = z.precision();
  Complex p(bits), dp(bits);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    dp = dp * z + p;
    p = p * z;
    p.re += *it;
  }
  return {std::move(p), std::move(dp)};
}

/// Re compared with a tolerance so conjugate-free ties fall through to Im.
bool root_less(const CertifiedRoot& a, const CertifiedRoot& b) {
  Real gap = (a.value.re - b.value.re).abs();
  if (gap > a.error_radius + b.error_radius) return a.value.re < b.value.re;
  return a.value.im < b.value.im;
}

std::vector<Complex> aberth(const std::vector<Real>& coeffs, std::uint64_t seed) {
  const std::size_t n = coeffs.size() - 1;
  // Radius from the Fujiwara-style bound max |a_(n-k)|^(1/k).
  double log_radius = 0;
  bool any = false;
  for (std::size_t k = 1; k <= n; ++k) {
    const Real& a = coeffs[n - k];
    if (a.is_zero()) continue;
    double lr = a.log2_abs() / static_cast<double>(k);
    if (!any || lr > log_radius) log_radius = lr;
    any = true;
  }
  Real radius = Real::pow2(0, kAberthBits);
  if (any) {
    mpfr_set_d(radius.get(), log_radius, MPFR_RNDN);
    mpfr_exp2(radius.get(), radius.get(), MPFR_RNDN);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.0, 0.05);
  const double offset = 0.4 + jitter(rng);

  std::vector<Complex> z;
  for (std::size_t k = 0; k < n; ++k) {
    Real angle(kAberthBits);
    mpfr_const_pi(angle.get(), MPFR_RNDN);
    angle *= Real(Rational(2 * static_cast<long>(k), static_cast<long>(n)), kAberthBits);
    angle += Real(Rational(offset), kAberthBits);
    Complex w(kAberthBits);
    mpfr_sin_cos(w.im.get(), w.re.get(), angle.get(), MPFR_RNDN);
    z.push_back(radius * w);
  }

  const Real one(1L, kAberthBits);
  const Real stop = Real::pow2(-110, kAberthBits);
  for (int iter = 0; iter < 2000; ++iter) {
    Real worst(kAberthBits);
    for (std::size_t k = 0; k < n; ++k) {
      Evaluation e = evaluate(coeffs, z[k]);
      if (e.value.re.is_zero() && e.value.im.is_zero()) continue;
      Complex ratio = e.value / e.derivative;
      Complex sum(kAberthBits);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == k) continue;
        sum = sum + Complex(one, Real(kAberthBits)) / (z[k] - z[j]);
      }
      Complex denom = Complex(one, Real(kAberthBits)) - ratio * sum;
      Complex step = ratio / denom;
      z[k] = z[k] - step;
      Real rel = step.abs() / max(one, z[k].abs());
      worst = max(worst, rel);
    }
    if (worst < stop) break;
  }
  return z;
}

Complex newton(const std::vector<Real>& coeffs, Complex z, mpfr_prec_t bits) {
  z = z.with_precision(bits);
  const Real one(1L, bits);
  const Real stop = Real::pow2(-static_cast<long>(bits) + 8, bits);
  for (int iter = 0; iter < 200; ++iter) {
    Evaluation e = evaluate(coeffs, z);
    if (e.value.re.is_zero() && e.value.im.is_zero()) break;
    Complex step = e.value / e.derivative;
    z = z - step;
    if (step.abs() <= stop * max(one, z.abs())) break;
  }
  return z;
}

Real inclusion_radius(const std::vector<Real>& coeffs, const Complex& z) {
  mpfr_prec_t bits = z.precision();
  Evaluation e = evaluate(coeffs, z);
  const long n = static_cast<long>(coeffs.size()) - 1;
  Real r = Real(n, bits) * (e.value.abs() / e.derivative.abs());
  // Slack for the rounding in the evaluation itself.
  r += Real::pow2(-static_cast<long>(bits) + 16, bits) * max(Real(1L, bits), z.abs());
  return r;
}

double finite_or_floor(double v) {
  return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
}

nlohmann::json log2_json(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  return v;
}

double residual_log2(const RealMatrix& m) { return finite_or_floor(exactalg::sup_norm(m).log2_abs()); }

RationalMatrix rational_inverse(const RationalMatrix& m) {
  const std::size_t n = m.rows();
  RationalMatrix aug(n, 2 * n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto pivots = exactalg::row_reduce(aug);
  if (pivots.size() < n || pivots[n - 1] >= n) throw Error(ErrorKind::PrecisionExhausted, "lattice basis is singular");
  RationalMatrix inv(n, n, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

double condition_log2(const RealMatrix& s, const RealMatrix& s_inv) {
  return exactalg::sup_norm(s).log2_abs() + exactalg::sup_norm(s_inv).log2_abs();
}

RealMatrix inverse_or_exhausted(const RealMatrix& s) {
  try {
    return exactalg::inverse(s);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Precision) throw Error(ErrorKind::PrecisionExhausted, "period basis is singular");
    throw;
  }
}

void finish_residuals(PeriodLattice& l) {
  const std::size_t n = l.j.rows();
  RealMatrix sq = l.j * l.j + exactalg::identity_real(n, l.working_bits);
  l.j_square_residual_log2 = residual_log2(sq);
  if (l.has_companion) {
    RealMatrix c = exactalg::to_real(l.companion, l.working_bits);
    l.commutator_residual_log2 = residual_log2(l.j * c - c * l.j);
  } else {
    l.commutator_residual_log2 = -std::numeric_limits<double>::infinity();
  }
}

bool invariants_hold(const PeriodLattice& l) {
  const double bound = -static_cast<double>(l.precision) / 2;
  return l.j_square_residual_log2 < bound && l.commutator_residual_log2 < bound;
}

void check_precision(long precision) {
  if (precision < 64) throw Error(ErrorKind::InvalidInput, "precision must be at least 64 bits");
}

/// Bits of an endless pseudo-random binary expansion in [0, 1); a longer
/// request extends a shorter one.
Rational random_fraction(std::uint64_t seed, std::size_t r, std::size_t c, std::size_t words) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c)};
  std::mt19937_64 gen(seq);
  Integer acc = 0;
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t x = gen();
    acc <<= 64;
    acc += Integer(static_cast<unsigned long>(x));
  }
  Integer den = 1;
  den <<= 64 * words;
  return Rational(acc, den);
}

}  // namespace

std::vector<CertifiedRoot> complex_roots(const RatPolynomial& f, long precision, std::uint64_t seed) {
  check_precision(precision);
  if (f.degree() < 1) throw Error(ErrorKind::InvalidInput, "complex_roots needs a nonconstant polynomial");
  if (!exactalg::is_squarefree(f)) throw Error(ErrorKind::InvalidInput, "complex_roots needs a squarefree polynomial");
  const RatPolynomial m = exactalg::monic(f);
  const std::size_t n = static_cast<std::size_t>(m.degree());
  const mpfr_prec_t bits = precision;

  std::vector<Complex> start = aberth(real_coefficients(m, kAberthBits), seed);
  std::vector<Real> coeffs = real_coefficients(m, bits);
  // Refine, snap to half precision, refine again: the jittered start only
  // affects bits far below the snap, so the output is seed independent.
  const mpfr_prec_t snap = std::max<mpfr_prec_t>(precision / 2, 53);
  std::vector<CertifiedRoot> roots;
  for (const auto& z0 : start) {
    Complex z = newton(coeffs, z0, bits);
    z = newton(coeffs, z.with_precision(snap), bits);
    CertifiedRoot root;
    root.error_radius = inclusion_radius(coeffs, z);
    root.value = std::move(z);
    roots.push_back(std::move(root));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Real gap = (roots[i].value - roots[j].value).abs();
      if (!(gap > roots[i].error_radius + roots[j].error_radius))
        throw Error(ErrorKind::PrecisionExhausted, "root inclusion disks overlap");
    }
  for (auto& r : roots) {
    if (r.value.im.abs() <= r.error_radius) {
      r.is_real = true;
      r.value.im = Real(bits);
    }
  }
  std::sort(roots.begin(), roots.end(), root_less);
  for (std::size_t i = 0; i < n; ++i) {
    if (roots[i].is_real) {
      roots[i].conjugate_partner = i;
      continue;
    }
    std::size_t best = i;
    Real best_gap(bits);
    bool found = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || roots[j].is_real) continue;
      Real gap = (roots[j].value - roots[i].value.conj()).abs();
      if (!found || gap < best_gap) {
        best = j;
        best_gap = gap;
        found = true;
      }
    }
    if (!found || best_gap > roots[i].error_radius + roots[best].error_radius)
      throw Error(ErrorKind::PrecisionExhausted, "could not pair a root with its conjugate");
    roots[i].conjugate_partner = best;
  }
  return roots;
}

RationalMatrix companion_matrix(const RatPolynomial& f) {
  if (f.degree() < 1) throw Error(ErrorKind::InvalidInput, "companion matrix of a constant");
  const RatPolynomial m = exactalg::monic(f);
  const std::size_t n = static_cast<std::size_t>(m.degree());
  RationalMatrix c(n, n, Rational(0));
  for (std::size_t k = 0; k + 1 < n; ++k) c(k + 1, k) = 1;
  for (std::size_t i = 0; i < n; ++i) c(i, n - 1) = -m[i];
  return c;
}

RealMatrix standard_complex_structure(long g, mpfr_prec_t bits) {
  const std::size_t n = static_cast<std::size_t>(2 * g);
  RealMatrix j(n, n, Real(bits));
  for (std::size_t b = 0; b < static_cast<std::size_t>(g); ++b) {
    j(2 * b, 2 * b + 1) = Real(-1L, bits);
    j(2 * b + 1, 2 * b) = Real(1L, bits);
  }
  return j;
}

RationalMatrix rational_complex_structure(const RationalMatrix& basis) {
  const std::size_t n = basis.rows();
  if (n == 0 || n % 2 != 0 || basis.cols() != n)
    throw Error(ErrorKind::InvalidInput, "lattice basis must be square of even size");
  RationalMatrix j0(n, n, Rational(0));
  for (std::size_t b = 0; b < n / 2; ++b) {
    j0(2 * b, 2 * b + 1) = -1;
    j0(2 * b + 1, 2 * b) = 1;
  }
  return rational_inverse(basis) * j0 * basis;
}

nlohmann::json LatticeSource::to_json() const {
  nlohmann::json j;
  switch (kind) {
    case LatticeKind::Polynomial:
      j["kind"] = "polynomial";
      j["polynomial"] = exactalg::to_json(f);
      j["embedding_bitmask"] = embedding_bitmask;
      break;
    case LatticeKind::RationalBasis:
      j["kind"] = "rational-basis";
      j["basis"] = exactalg::to_json(basis);
      break;
    case LatticeKind::RandomBasis:
      j["kind"] = "random-basis";
      j["seed"] = seed;
      break;
  }
  j["g"] = g;
  return j;
}

nlohmann::json PeriodLattice::to_json() const {
  nlohmann::json j;
  j["g"] = g;
  j["source"] = source.to_json();
  j["precision"] = precision;
  j["working_bits"] = static_cast<long>(working_bits);
  if (!roots.empty()) {
    nlohmann::json rs = nlohmann::json::array();
    for (const auto& r : roots)
      rs.push_back({{"re", r.value.re.to_hex()},
                    {"im", r.value.im.to_hex()},
                    {"radius_log2", log2_json(r.error_radius.log2_abs())},
                    {"conjugate_partner", r.conjugate_partner},
                    {"real", r.is_real}});
    j["roots"] = rs;
    nlohmann::json emb = nlohmann::json::array();
    for (const auto& z : embedding) emb.push_back({z.re.to_hex(), z.im.to_hex()});
    j["embedding"] = emb;
    j["leading_coefficient"] = exactalg::to_decimal(leading_coefficient);
  }
  if (has_companion) j["companion"] = exactalg::to_json(companion);
  j["basis"] = exactalg::to_json(basis);
  j["j"] = exactalg::to_json(this->j);
  j["log2_condition"] = log2_json(log2_condition);
  j["j_square_residual_log2"] = log2_json(j_square_residual_log2);
  j["commutator_residual_log2"] = log2_json(commutator_residual_log2);
  return j;
}

PeriodLattice build_period_lattice(const RatPolynomial& f, long precision, unsigned long embedding_bitmask,
                                   std::uint64_t seed) {
  check_precision(precision);
  if (f.degree() < 2 || f.degree() % 2 != 0)
    throw Error(ErrorKind::InvalidInput, "period lattice needs a polynomial of even degree 2g");
  if (exactalg::sturm_count(f) != 0)
    throw Error(ErrorKind::Dependency, "polynomial has real roots; no purely imaginary certificate possible");
  const long g = f.degree() / 2;
  if (g < static_cast<long>(8 * sizeof(unsigned long)) && (embedding_bitmask >> g) != 0)
    throw Error(ErrorKind::InvalidInput, "embedding bitmask has bits beyond g");

  PeriodLattice l;
  l.g = g;
  l.source.kind = LatticeKind::Polynomial;
  l.source.f = f;
  l.source.g = g;
  l.source.embedding_bitmask = embedding_bitmask;
  l.precision = precision;
  l.leading_coefficient = f.leading();
  l.has_companion = true;
  l.companion = companion_matrix(f);

  const std::size_t n = static_cast<std::size_t>(2 * g);
  mpfr_prec_t bits = precision + 64;
  bool conditioned = false;
  while (true) {
    if (bits > 2 * kMaxPrecision + 64)
      throw Error(ErrorKind::PrecisionExhausted, "period lattice invariants not met within the precision cap");
    l.working_bits = bits;
    l.roots = complex_roots(f, bits, seed);
    l.embedding.clear();
    for (const auto& r : l.roots) {
      if (r.value.im.sign() > 0) l.embedding.push_back(r.value);
    }
    if (l.embedding.size() != static_cast<std::size_t>(g))
      throw Error(ErrorKind::Internal, "expected g roots in the upper half plane");
    for (long k = 0; k < g && k < static_cast<long>(8 * sizeof(unsigned long)); ++k)
      if ((embedding_bitmask >> k) & 1UL) l.embedding[k] = l.embedding[k].conj();

    l.basis = RealMatrix(n, n, Real(bits));
    for (std::size_t jdx = 0; jdx < static_cast<std::size_t>(g); ++jdx) {
      Complex power(Real(1L, bits), Real(bits));
      for (std::size_t k = 0; k < n; ++k) {
        l.basis(2 * jdx, k) = power.re;
        l.basis(2 * jdx + 1, k) = power.im;
        power = power * l.embedding[jdx];
      }
    }
    RealMatrix s_inv = inverse_or_exhausted(l.basis);
    l.log2_condition = condition_log2(l.basis, s_inv);
    const mpfr_prec_t wanted = precision + 64 + static_cast<mpfr_prec_t>(std::ceil(std::max(0.0, l.log2_condition)));
    if (!conditioned && wanted > bits) {
      conditioned = true;
      bits = wanted;
      continue;
    }
    conditioned = true;
    l.j = s_inv * standard_complex_structure(g, bits) * l.basis;
    finish_residuals(l);
    if (invariants_hold(l)) return l;
    bits *= 2;
  }
}

PeriodLattice lattice_from_rational_basis(const RationalMatrix& basis, long precision) {
  check_precision(precision);
  const std::size_t n = basis.rows();
  if (n == 0 || n % 2 != 0 || basis.cols() != n)
    throw Error(ErrorKind::InvalidInput, "lattice basis must be square of even size");
  const long g = static_cast<long>(n / 2);
  RationalMatrix inv = rational_inverse(basis);
  PeriodLattice l;
  l.g = g;
  l.source.kind = LatticeKind::RationalBasis;
  l.source.basis = basis;
  l.source.g = g;
  l.precision = precision;
  l.working_bits = precision + 64;
  l.basis = exactalg::to_real(basis, l.working_bits);
  l.j = exactalg::to_real(rational_complex_structure(basis), l.working_bits);
  l.log2_condition = condition_log2(l.basis, exactalg::to_real(inv, l.working_bits));
  finish_residuals(l);
  return l;
}

PeriodLattice random_period_lattice(long g, std::uint64_t seed, long precision) {
  check_precision(precision);
  if (g < 1) throw Error(ErrorKind::InvalidInput, "g must be positive");
  const std::size_t n = static_cast<std::size_t>(2 * g);
  PeriodLattice l;
  l.g = g;
  l.source.kind = LatticeKind::RandomBasis;
  l.source.g = g;
  l.source.seed = seed;
  l.precision = precision;
  mpfr_prec_t bits = precision + 64;
  bool conditioned = false;
  while (true) {
    if (bits > 2 * kMaxPrecision + 64)
      throw Error(ErrorKind::PrecisionExhausted, "random lattice is too ill-conditioned");
    l.working_bits = bits;
    const std::size_t words = static_cast<std::size_t>(bits) / 64 + 2;
    l.basis = RealMatrix(n, n, Real(bits));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        l.basis(r, c) = Real(Rational(2) * random_fraction(seed, r, c, words) - 1, bits);
    RealMatrix s_inv = inverse_or_exhausted(l.basis);
    l.log2_condition = condition_log2(l.basis, s_inv);
    const mpfr_prec_t wanted = precision + 64 + static_cast<mpfr_prec_t>(std::ceil(std::max(0.0, l.log2_condition)));
    if (!conditioned && wanted > bits) {
      conditioned = true;
      bits = wanted;
      continue;
    }
    conditioned = true;
    l.j = s_inv * standard_complex_structure(g, bits) * l.basis;
    finish_residuals(l);
    if (invariants_hold(l)) return l;
    bits *= 2;
  }
}

PeriodLattice rebuild(const LatticeSource& source, long precision) {
  switch (source.kind) {
    case LatticeKind::Polynomial: return build_period_lattice(source.f, precision, source.embedding_bitmask);
    case LatticeKind::RationalBasis: return lattice_from_rational_basis(source.basis, precision);
    case LatticeKind::RandomBasis: return random_period_lattice(source.g, source.seed, precision);
  }
  throw Error(ErrorKind::Internal, "unknown lattice source");
}

}  // namespace torusforge::periods
