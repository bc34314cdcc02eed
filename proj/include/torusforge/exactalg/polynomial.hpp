#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "torusforge/error.hpp"
#include "torusforge/exactalg/numbers.hpp"

namespace torusforge::exactalg {

/// Dense univariate polynomial, coefficients in ascending degree order.
/// The zero polynomial is the empty sequence; otherwise the leading
/// coefficient is nonzero.
template <typename Coeff>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Coeff> coefficients) : coeffs_(std::move(coefficients)) { trim(); }
  Polynomial(std::initializer_list<Coeff> coefficients) : coeffs_(coefficients) { trim(); }

  static Polynomial monomial(const Coeff& c, std::size_t degree) {
    std::vector<Coeff> v(degree + 1, Coeff(0));
    v[degree] = c;
    return Polynomial(std::move(v));
  }

  bool is_zero() const { return coeffs_.empty(); }
  /// Degree; -1 for the zero polynomial.
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  const std::vector<Coeff>& coefficients() const { return coeffs_; }
  Coeff operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Coeff(0); }
  const Coeff& leading() const {
    if (coeffs_.empty()) throw Error(ErrorKind::InvalidInput, "leading coefficient of zero polynomial");
    return coeffs_.back();
  }

  Polynomial derivative() const {
    std::vector<Coeff> d;
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d.push_back(coeffs_[i] * Coeff(static_cast<long>(i)));
    return Polynomial(std::move(d));
  }

  template <typename X>
  X evaluate(const X& x) const {
    X acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + X(*it);
    return acc;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Coeff> r(std::max(a.coeffs_.size(), b.coeffs_.size()), Coeff(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) r[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) r[i] += b.coeffs_[i];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a) {
    std::vector<Coeff> r = a.coeffs_;
    for (auto& c : r) c = -c;
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Coeff> r(a.coeffs_.size() + b.coeffs_.size() - 1, Coeff(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(const Coeff& s, const Polynomial& a) {
    std::vector<Coeff> r = a.coeffs_;
    for (auto& c : r) c *= s;
    return Polynomial(std::move(r));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<Coeff> coeffs_;
};

using IntPolynomial = Polynomial<Integer>;
using RatPolynomial = Polynomial<Rational>;

RatPolynomial to_rational(const IntPolynomial& f);

/// Content and primitive part: f = content * primitive, primitive in Z[x]
/// with positive leading coefficient and coprime coefficients.
std::pair<Rational, IntPolynomial> content_and_primitive(const RatPolynomial& f);
IntPolynomial primitive_part(const RatPolynomial& f);
IntPolynomial primitive_part(const IntPolynomial& f);

/// Exact division with remainder over Q.
std::pair<RatPolynomial, RatPolynomial> divmod(const RatPolynomial& a, const RatPolynomial& b);
RatPolynomial operator%(const RatPolynomial& a, const RatPolynomial& b);

/// Pseudo-remainder scaled by |lc(b)|^(deg a - deg b + 1), so its sign agrees
/// with the true remainder.
IntPolynomial signed_pseudo_remainder(const IntPolynomial& a, const IntPolynomial& b);

/// Monic gcd over Q (zero if both are zero).
RatPolynomial gcd(const RatPolynomial& a, const RatPolynomial& b);
RatPolynomial monic(const RatPolynomial& f);

bool is_squarefree(const RatPolynomial& f);

std::string to_string(const RatPolynomial& f, const std::string& var = "x");
std::string to_string(const IntPolynomial& f, const std::string& var = "x");

/// Shared wire format: JSON array of decimal strings, ascending degree.
nlohmann::json to_json(const RatPolynomial& f);
RatPolynomial rat_polynomial_from_json(const nlohmann::json& j);

/// Hex SHA-256 of the canonical JSON of the polynomial normalized to be monic.
/// Scalar multiples share a hash because they define the same field.
std::string polynomial_hash(const RatPolynomial& f);

}  // namespace torusforge::exactalg
