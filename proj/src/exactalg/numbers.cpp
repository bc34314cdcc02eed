#include "torusforge/exactalg/numbers.hpp"

#include "torusforge/error.hpp"

namespace torusforge::exactalg {

Rational parse_rational(const std::string& text) {
  Rational q;
  if (text.empty() || q.set_str(text, 10) != 0) {
    throw Error(ErrorKind::InvalidInput, "not a rational number: '" + text + "'");
  }
  if (q.get_den() == 0) throw Error(ErrorKind::InvalidInput, "zero denominator: '" + text + "'");
  q.canonicalize();
  return q;
}

Integer parse_integer(const std::string& text) {
  Integer z;
  if (text.empty() || z.set_str(text, 10) != 0) {
    throw Error(ErrorKind::InvalidInput, "not an integer: '" + text + "'");
  }
  return z;
}

long valuation(const Integer& x, const Integer& p) {
  if (x == 0) throw Error(ErrorKind::InvalidInput, "valuation of zero");
  if (p < 2) throw Error(ErrorKind::InvalidInput, "valuation base must be >= 2");
  Integer rest = x;
  long v = 0;
  while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
    ++v;
  }
  return v;
}

long valuation(const Rational& x, const Integer& p) {
  return valuation(Integer(x.get_num()), p) - valuation(Integer(x.get_den()), p);
}

std::uint64_t reduce_mod(const Rational& x, std::uint64_t p) {
  Integer modulus(static_cast<unsigned long>(p));
  Integer num = x.get_num() % modulus;
  if (num < 0) num += modulus;
  Integer den = x.get_den() % modulus;
  if (den == 0) {
    throw Error(ErrorKind::BadPrime, "prime " + modulus.get_str() + " divides a denominator");
  }
  Integer inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), modulus.get_mpz_t());
  Integer r = (num * inv) % modulus;
  return r.get_ui();
}

Integer pow(const Integer& base, unsigned long exponent) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

Rational pow(const Rational& base, unsigned long exponent) {
  return make_rational(pow(Integer(base.get_num()), exponent), pow(Integer(base.get_den()), exponent));
}

long floor_log2(const Integer& x) {
  if (x == 0) throw Error(ErrorKind::InvalidInput, "log2 of zero");
  return static_cast<long>(mpz_sizeinbase(x.get_mpz_t(), 2)) - 1;
}

}  // namespace torusforge::exactalg
