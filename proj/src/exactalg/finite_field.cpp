#include "torusforge/exactalg/finite_field.hpp"

#include <algorithm>

#include "torusforge/exactalg/number_theory.hpp"

namespace torusforge::exactalg {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t inverse(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw Error(ErrorKind::InvalidInput, "inverse of zero in F_p");
  return powmod(a, p - 2, p);
}

}  // namespace

FpPolynomial::FpPolynomial(std::uint64_t p, std::vector<std::uint64_t> coefficients) : p_(p), c_(std::move(coefficients)) {
  for (auto& c : c_) c %= p_;
  trim();
}

void FpPolynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

FpPolynomial FpPolynomial::reduce(const RatPolynomial& f, std::uint64_t p) {
  std::vector<std::uint64_t> c;
  c.reserve(f.coefficients().size());
  for (const auto& a : f.coefficients()) c.push_back(reduce_mod(a, p));
  return FpPolynomial(p, std::move(c));
}

FpPolynomial FpPolynomial::derivative() const {
  std::vector<std::uint64_t> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(mulmod(c_[i], i % p_, p_));
  return FpPolynomial(p_, std::move(d));
}

FpPolynomial FpPolynomial::monic() const {
  if (is_zero()) return *this;
  std::uint64_t inv = inverse(c_.back(), p_);
  std::vector<std::uint64_t> r = c_;
  for (auto& c : r) c = mulmod(c, inv, p_);
  return FpPolynomial(p_, std::move(r));
}

FpPolynomial operator+(const FpPolynomial& a, const FpPolynomial& b) {
  std::vector<std::uint64_t> r(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::uint64_t x = i < a.c_.size() ? a.c_[i] : 0;
    std::uint64_t y = i < b.c_.size() ? b.c_[i] : 0;
    r[i] = (x + y) % a.p_;
  }
  return FpPolynomial(a.p_, std::move(r));
}

FpPolynomial operator-(const FpPolynomial& a, const FpPolynomial& b) {
  std::vector<std::uint64_t> r(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::uint64_t x = i < a.c_.size() ? a.c_[i] : 0;
    std::uint64_t y = i < b.c_.size() ? b.c_[i] : 0;
    r[i] = (x + a.p_ - y) % a.p_;
  }
  return FpPolynomial(a.p_, std::move(r));
}

FpPolynomial operator*(const FpPolynomial& a, const FpPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return FpPolynomial(a.p_, {});
  std::vector<std::uint64_t> r(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = (r[i + j] + mulmod(a.c_[i], b.c_[j], a.p_)) % a.p_;
  }
  return FpPolynomial(a.p_, std::move(r));
}

namespace {

std::pair<FpPolynomial, FpPolynomial> fp_divmod(const FpPolynomial& a, const FpPolynomial& b) {
  if (b.is_zero()) throw Error(ErrorKind::InvalidInput, "F_p polynomial division by zero");
  const std::uint64_t p = a.prime();
  std::vector<std::uint64_t> rem = a.coefficients();
  const long db = b.degree();
  if (a.degree() < db) return {FpPolynomial(p, {}), a};
  std::vector<std::uint64_t> quo(static_cast<std::size_t>(a.degree() - db + 1), 0);
  const std::uint64_t inv = inverse(b.coefficients().back(), p);
  for (long k = a.degree() - db; k >= 0; --k) {
    std::uint64_t q = mulmod(rem[static_cast<std::size_t>(k + db)], inv, p);
    quo[static_cast<std::size_t>(k)] = q;
    if (q == 0) continue;
    for (long j = 0; j <= db; ++j) {
      auto& r = rem[static_cast<std::size_t>(k + j)];
      r = (r + p - mulmod(q, b.coefficients()[static_cast<std::size_t>(j)], p)) % p;
    }
  }
  rem.resize(static_cast<std::size_t>(db));
  return {FpPolynomial(p, std::move(quo)), FpPolynomial(p, std::move(rem))};
}

}  // namespace

FpPolynomial operator%(const FpPolynomial& a, const FpPolynomial& b) { return fp_divmod(a, b).second; }
FpPolynomial operator/(const FpPolynomial& a, const FpPolynomial& b) { return fp_divmod(a, b).first; }

FpPolynomial gcd(FpPolynomial a, FpPolynomial b) {
  while (!b.is_zero()) {
    FpPolynomial r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

FpPolynomial powmod(const FpPolynomial& base, const Integer& e, const FpPolynomial& m) {
  FpPolynomial result(base.prime(), {1});
  result = result % m;
  FpPolynomial b = base % m;
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = (result * result) % m;
    if (mpz_tstbit(e.get_mpz_t(), i)) result = (result * b) % m;
  }
  return result;
}

nlohmann::json FactorPattern::to_json() const {
  return {{"prime", prime}, {"degrees", degrees}, {"squarefree", squarefree}};
}

FactorPattern factor_degree_pattern(const RatPolynomial& f, std::uint64_t p) {
  if (f.is_zero()) throw Error(ErrorKind::InvalidInput, "factor pattern of the zero polynomial");
  if (!is_prime(Integer(static_cast<unsigned long>(p)))) {
    throw Error(ErrorKind::InvalidInput, std::to_string(p) + " is not prime");
  }
  FpPolynomial fp = FpPolynomial::reduce(f, p);
  if (fp.degree() != f.degree()) {
    throw Error(ErrorKind::BadPrime, std::to_string(p) + " divides the leading coefficient");
  }
  FactorPattern pattern;
  pattern.prime = p;
  fp = fp.monic();
  if (fp.degree() == 0) {
    pattern.squarefree = true;
    return pattern;
  }
  if (gcd(fp, fp.derivative()).degree() != 0) return pattern;
  pattern.squarefree = true;

  const FpPolynomial x(p, {0, 1});
  const Integer pz(static_cast<unsigned long>(p));
  FpPolynomial rest = fp;
  FpPolynomial h = x;  // x^(p^d) mod rest
  for (long d = 1; 2 * d <= rest.degree(); ++d) {
    h = powmod(h, pz, rest);
    FpPolynomial g = gcd(h - x, rest);
    if (g.degree() > 0) {
      for (long k = 0; k < g.degree() / d; ++k) pattern.degrees.push_back(d);
      rest = rest / g;
      h = h % rest;
    }
  }
  if (rest.degree() > 0) pattern.degrees.push_back(rest.degree());
  std::sort(pattern.degrees.begin(), pattern.degrees.end());
  return pattern;
}

FactorPattern factor_degree_pattern(const IntPolynomial& f, std::uint64_t p) {
  return factor_degree_pattern(to_rational(f), p);
}

}  // namespace torusforge::exactalg
