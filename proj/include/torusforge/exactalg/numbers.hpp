#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace torusforge {

using Integer = mpz_class;
using Rational = mpq_class;

namespace exactalg {

inline Rational make_rational(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Decimal form used by every JSON surface: "n" for integers, "n/d" otherwise.
inline std::string to_decimal(const Rational& q) { return q.get_str(10); }
inline std::string to_decimal(const Integer& z) { return z.get_str(10); }

Rational parse_rational(const std::string& text);
Integer parse_integer(const std::string& text);

/// v_p(x) for nonzero x; throws on zero.
long valuation(const Integer& x, const Integer& p);
long valuation(const Rational& x, const Integer& p);

/// Least nonnegative residue of a rational whose denominator is prime to p.
std::uint64_t reduce_mod(const Rational& x, std::uint64_t p);

inline int sign(const Integer& z) { return sgn(z); }
inline int sign(const Rational& q) { return sgn(q); }

Integer pow(const Integer& base, unsigned long exponent);
Rational pow(const Rational& base, unsigned long exponent);

/// Floor of log2|x| for nonzero x.
long floor_log2(const Integer& x);

}  // namespace exactalg
}  // namespace torusforge
