#include "torusforge/families/families.hpp"

#include <algorithm>

#include "torusforge/error.hpp"
#include "torusforge/exactalg/number_theory.hpp"
#include "torusforge/exactalg/real.hpp"
#include "torusforge/exactalg/sturm.hpp"

namespace torusforge::families {

using exactalg::is_prime;
using exactalg::Real;

namespace {

void require_g(long g) {
  if (g < 2) throw Error(ErrorKind::InvalidInput, "g must be at least 2, got " + std::to_string(g));
}

bool divides(long d, const Integer& n) { return n % d == 0; }

std::vector<long> prime_divisors(long n) {
  std::vector<long> out;
  for (const auto& [q, e] : exactalg::factor(static_cast<std::uint64_t>(n))) out.push_back(static_cast<long>(q));
  return out;
}

bool real_root_free(long g, long l, long p, const Integer& b, const Integer& c) {
  return exactalg::sturm_count(quadruple_polynomial_unchecked(g, l, p, b, c)) == 0;
}

Integer parse_json_integer(const nlohmann::json& j) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) return exactalg::parse_integer(j.get<std::string>());
  throw Error(ErrorKind::InvalidInput, "expected an integer");
}

}  // namespace

RatPolynomial truncated_exponential(long n) {
  if (n <= 0) throw Error(ErrorKind::InvalidInput, "exp_n needs n >= 1, got " + std::to_string(n));
  std::vector<Rational> c;
  Integer fact = 1;
  for (long j = 0; j <= n; ++j) {
    if (j > 0) fact *= j;
    c.push_back(exactalg::make_rational(Integer(1), fact));
  }
  return RatPolynomial(std::move(c));
}

IntPolynomial scaled_truncated_exponential(long n) {
  if (n <= 0) throw Error(ErrorKind::InvalidInput, "exp_n needs n >= 1, got " + std::to_string(n));
  // n!/j! for j = 0..n
  std::vector<Integer> c(static_cast<std::size_t>(n) + 1);
  Integer acc = 1;
  for (long j = n; j >= 0; --j) {
    c[static_cast<std::size_t>(j)] = acc;
    acc *= j;
  }
  return IntPolynomial(std::move(c));
}

IntPolynomial selmer(long g) {
  require_g(g);
  if (g % 3 == 1) {
    throw Error(ErrorKind::UnsupportedParameter,
                "g = " + std::to_string(g) + " is 1 mod 3, so x^2 + x + 1 divides x^" + std::to_string(2 * g) + " + x + 1");
  }
  std::vector<Integer> c(static_cast<std::size_t>(2 * g) + 1, Integer(0));
  c[0] = 1;
  c[1] = 1;
  c.back() = 1;
  return IntPolynomial(std::move(c));
}

void AdmissibleQuadruple::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidQuadruple, what); };
  if (g < 2) fail("g >= 2");
  if (l < 2 || !is_prime(Integer(l))) fail("l is prime");
  if ((2 * g - 1) % l != 0) fail("l divides 2g-1");
  if (p < 2 || !is_prime(Integer(p))) fail("p is prime");
  if (p % (2 * g - 1) != 1) fail("p = 1 mod 2g-1");
  if (divides(l, b)) fail("l does not divide b");
  if (divides(p, b) || !exactalg::primitive_root_check(b, static_cast<std::uint64_t>(p))) fail("b is a primitive root mod p");
  if (divides(l, c)) fail("l does not divide c");
}

nlohmann::json AdmissibleQuadruple::to_json() const {
  return {{"g", g}, {"l", l}, {"p", p}, {"b", b.get_str()}, {"c", c.get_str()}};
}

AdmissibleQuadruple AdmissibleQuadruple::from_json(const nlohmann::json& j) {
  AdmissibleQuadruple q;
  try {
    q.g = j.at("g").get<long>();
    q.l = j.at("l").get<long>();
    q.p = j.at("p").get<long>();
    q.b = parse_json_integer(j.at("b"));
    q.c = parse_json_integer(j.at("c"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed quadruple: ") + e.what());
  }
  return q;
}

RatPolynomial quadruple_polynomial_unchecked(long g, long l, long p, const Integer& b, const Integer& c) {
  std::vector<Rational> coeffs(static_cast<std::size_t>(2 * g) + 1, Rational(0));
  coeffs[0] = -exactalg::make_rational(Integer(p) * c, exactalg::pow(Integer(l), static_cast<unsigned long>(l)));
  coeffs[1] = -b;
  coeffs.back() = 1;
  return RatPolynomial(std::move(coeffs));
}

RatPolynomial quadruple_polynomial(const AdmissibleQuadruple& q) {
  q.validate();
  return quadruple_polynomial_unchecked(q.g, q.l, q.p, q.b, q.c);
}

RealRootThreshold max_c_without_real_roots(long g, long l, long p, const Integer& b) {
  require_g(g);
  if (l < 2 || p < 2) throw Error(ErrorKind::InvalidInput, "l and p must be primes");
  // The real-root-free set is closed downward in c: lowering c raises f pointwise.
  // c = 0 gives the root x = 0.
  Integer hi = 0;
  Integer lo = -1;
  while (!real_root_free(g, l, p, b, lo)) {
    hi = lo;
    lo *= 2;
  }
  while (hi - lo > 1) {
    Integer mid = lo + (hi - lo) / 2;
    if (real_root_free(g, l, p, b, mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  RealRootThreshold t;
  t.max_c = lo;
  const mpfr_prec_t bits = 128;
  const Rational ratio = exactalg::make_rational(b, Integer(2 * g));
  const Real beta = Real(ratio, bits).root(static_cast<unsigned long>(2 * g - 1));
  const Real scale = Real(exactalg::pow(Integer(l), static_cast<unsigned long>(l)), bits) * beta / Real(p, bits);
  t.threshold_minus_1 = (scale * Real(ratio - 1, bits)).to_double();
  t.threshold_minus_b = (scale * Real(ratio - b, bits)).to_double();
  return t;
}

nlohmann::json RealRootThreshold::to_json() const {
  return {{"max_c", max_c.get_str()},
          {"threshold_minus_1", threshold_minus_1},
          {"threshold_minus_b", threshold_minus_b}};
}

Integer adjust_c(const Integer& c, const QuadrupleContext& ctx, std::optional<long> ell) {
  if (divides(ctx.l, c)) throw Error(ErrorKind::InvalidInput, "c must not be divisible by l");
  Integer step = Integer(ctx.l) * ctx.p;
  if (ell) {
    if (*ell < 2 || !is_prime(Integer(*ell))) throw Error(ErrorKind::InvalidInput, "ell must be prime");
    if ((ctx.l * ctx.p) % *ell == 0) throw Error(ErrorKind::InvalidInput, "ell must not divide l p");
    step *= Integer(*ell) * *ell;
  }
  const Integer max_c = max_c_without_real_roots(ctx.g, ctx.l, ctx.p, ctx.b).max_c;
  Integer n = 0;
  if (c > max_c) {
    Integer excess = c - max_c;
    mpz_cdiv_q(n.get_mpz_t(), excess.get_mpz_t(), step.get_mpz_t());
  }
  Integer out = c - n * step;
  if (!real_root_free(ctx.g, ctx.l, ctx.p, ctx.b, out)) {
    throw Error(ErrorKind::Internal, "adjusted c still leaves real roots");
  }
  return out;
}

QuadrupleEnumerator::QuadrupleEnumerator(long g, EnumerationBudget budget) : g_(g), budget_(budget) {
  require_g(g);
  ls_ = prime_divisors(2 * g - 1);
}

bool QuadrupleEnumerator::advance_tuple() {
  const long modulus = 2 * g_ - 1;
  auto next_p = [&](long from) {
    for (long q = from + 1;; ++q) {
      if (q >= budget_.max_p) return -1L;
      if (q % modulus == 1 && is_prime(Integer(q))) return q;
    }
  };
  while (!done_) {
    if (!started_) {
      started_ = true;
      p_ = next_p(1);
      b_ = 1;
      l_index_ = 0;
      if (p_ < 0 || budget_.max_b < 1) {
        done_ = true;
        break;
      }
    } else if (++l_index_ == ls_.size()) {
      l_index_ = 0;
      if (++b_ > budget_.max_b) {
        b_ = 1;
        p_ = next_p(p_);
        if (p_ < 0) {
          done_ = true;
          break;
        }
      }
    }
    const long l = ls_[l_index_];
    if (b_ % p_ == 0 || b_ % l == 0) continue;
    if (!exactalg::primitive_root_check(Integer(b_), static_cast<std::uint64_t>(p_))) continue;
    return true;
  }
  return false;
}

std::optional<AdmissibleQuadruple> QuadrupleEnumerator::next() {
  while (emitted_ < budget_.max_items) {
    if (!pending_.empty()) {
      AdmissibleQuadruple q{g_, ls_[l_index_], p_, Integer(b_), pending_.back()};
      pending_.pop_back();
      ++emitted_;
      return q;
    }
    if (budget_.c_per_tuple <= 0 || !advance_tuple()) return std::nullopt;
    const long l = ls_[l_index_];
    Integer c = max_c_without_real_roots(g_, l, p_, Integer(b_)).max_c;
    std::vector<Integer> cs;
    while (static_cast<long>(cs.size()) < budget_.c_per_tuple) {
      if (!divides(l, c)) cs.push_back(c);
      --c;
    }
    pending_.assign(cs.rbegin(), cs.rend());
  }
  return std::nullopt;
}

std::vector<AdmissibleQuadruple> enumerate_quadruples(long g, const EnumerationBudget& budget) {
  QuadrupleEnumerator e(g, budget);
  std::vector<AdmissibleQuadruple> out;
  while (auto q = e.next()) out.push_back(*q);
  return out;
}

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::TruncatedExponential: return "truncated-exponential";
    case FamilyKind::Selmer: return "selmer";
    case FamilyKind::Quadruple: return "quadruple";
  }
  return "unknown";
}

FamilyKind family_kind_from_string(const std::string& s) {
  if (s == "truncated-exponential" || s == "exp") return FamilyKind::TruncatedExponential;
  if (s == "selmer") return FamilyKind::Selmer;
  if (s == "quadruple") return FamilyKind::Quadruple;
  throw Error(ErrorKind::InvalidInput, "unknown family kind '" + s + "'");
}

RatPolynomial FamilySpec::polynomial() const {
  switch (kind) {
    case FamilyKind::TruncatedExponential:
      require_g(g);
      return truncated_exponential(2 * g);
    case FamilyKind::Selmer: return exactalg::to_rational(selmer(g));
    case FamilyKind::Quadruple:
      if (!quadruple) throw Error(ErrorKind::InvalidInput, "quadruple family without parameters");
      if (quadruple->g != g) throw Error(ErrorKind::InvalidInput, "quadruple genus does not match the family");
      return quadruple_polynomial(*quadruple);
  }
  throw Error(ErrorKind::Internal, "unreachable family kind");
}

nlohmann::json FamilySpec::to_json() const {
  nlohmann::json j{{"kind", to_string(kind)}, {"g", g}};
  if (quadruple) j["quadruple"] = {quadruple->l, quadruple->p, quadruple->b.get_str(), quadruple->c.get_str()};
  return j;
}

FamilySpec FamilySpec::from_json(const nlohmann::json& j) {
  FamilySpec s;
  try {
    s.kind = family_kind_from_string(j.at("kind").get<std::string>());
    s.g = j.at("g").get<long>();
    if (j.contains("quadruple")) {
      const auto& q = j.at("quadruple");
      if (!q.is_array() || q.size() != 4) throw Error(ErrorKind::InvalidInput, "quadruple must be [l, p, b, c]");
      s.quadruple = AdmissibleQuadruple{s.g, q[0].get<long>(), q[1].get<long>(), parse_json_integer(q[2]),
                                        parse_json_integer(q[3])};
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed family spec: ") + e.what());
  }
  return s;
}

}  // namespace torusforge::families
