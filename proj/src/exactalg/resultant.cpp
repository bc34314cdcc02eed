#include "torusforge/exactalg/resultant.hpp"

namespace torusforge::exactalg {

Rational resultant(const RatPolynomial& f, const RatPolynomial& g) {
  if (f.is_zero() || g.is_zero()) throw Error(ErrorKind::InvalidInput, "resultant of the zero polynomial");
  RatPolynomial a = f;
  RatPolynomial b = g;
  Rational acc = 1;
  // res(a, b) = (-1)^(deg a deg b) res(b, a) and res(b, a) = lc(b)^(deg a - deg r) res(b, r).
  while (true) {
    const long m = a.degree();
    const long n = b.degree();
    if (n == 0) return acc * pow(b.leading(), static_cast<unsigned long>(m));
    if (m == 0) return acc * pow(a.leading(), static_cast<unsigned long>(n));
    RatPolynomial r = a % b;
    if (r.is_zero()) return 0;
    if ((m * n) % 2 == 1) acc = -acc;
    acc *= pow(b.leading(), static_cast<unsigned long>(m - r.degree()));
    a = std::move(b);
    b = std::move(r);
  }
}

Rational discriminant(const RatPolynomial& f) {
  const long n = f.degree();
  if (n < 1) throw Error(ErrorKind::InvalidInput, "discriminant needs degree >= 1");
  if (n == 1) return 1;
  Rational d = resultant(f, f.derivative()) / f.leading();
  if ((n * (n - 1) / 2) % 2 == 1) d = -d;
  return d;
}

}  // namespace torusforge::exactalg
