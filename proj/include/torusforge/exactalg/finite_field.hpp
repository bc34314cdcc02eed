#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <vector>

#include "torusforge/exactalg/polynomial.hpp"

namespace torusforge::exactalg {

/// Polynomial over F_p, ascending coefficients in [0, p), trimmed.
class FpPolynomial {
 public:
  FpPolynomial(std::uint64_t p, std::vector<std::uint64_t> coefficients);
  static FpPolynomial reduce(const RatPolynomial& f, std::uint64_t p);

  std::uint64_t prime() const { return p_; }
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<std::uint64_t>& coefficients() const { return c_; }

  FpPolynomial derivative() const;
  FpPolynomial monic() const;

  friend FpPolynomial operator+(const FpPolynomial& a, const FpPolynomial& b);
  friend FpPolynomial operator-(const FpPolynomial& a, const FpPolynomial& b);
  friend FpPolynomial operator*(const FpPolynomial& a, const FpPolynomial& b);
  friend FpPolynomial operator%(const FpPolynomial& a, const FpPolynomial& b);
  friend FpPolynomial operator/(const FpPolynomial& a, const FpPolynomial& b);
  friend bool operator==(const FpPolynomial& a, const FpPolynomial& b) { return a.p_ == b.p_ && a.c_ == b.c_; }

 private:
  void trim();
  std::uint64_t p_;
  std::vector<std::uint64_t> c_;
};

FpPolynomial gcd(FpPolynomial a, FpPolynomial b);
/// base^e mod m.
FpPolynomial powmod(const FpPolynomial& base, const Integer& e, const FpPolynomial& m);

struct FactorPattern {
  std::uint64_t prime = 0;
  /// Irreducible factor degrees, ascending; empty unless squarefree.
  std::vector<long> degrees;
  bool squarefree = false;

  nlohmann::json to_json() const;
  friend bool operator==(const FactorPattern&, const FactorPattern&) = default;
};

/// Degree pattern of f mod p by distinct-degree factorization.
/// Throws bad-prime when p divides lc(f) or a coefficient denominator.
FactorPattern factor_degree_pattern(const RatPolynomial& f, std::uint64_t p);
FactorPattern factor_degree_pattern(const IntPolynomial& f, std::uint64_t p);

}  // namespace torusforge::exactalg
