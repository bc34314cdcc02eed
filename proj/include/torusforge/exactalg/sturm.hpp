#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <utility>
#include <vector>

#include "torusforge/exactalg/polynomial.hpp"

namespace torusforge::exactalg {

/// A point of the extended real line with a rational finite part.
struct ExtendedRational {
  enum class Kind { NegInf, Finite, PosInf };
  Kind kind = Kind::Finite;
  Rational value;

  static ExtendedRational neg_inf() { return {Kind::NegInf, Rational(0)}; }
  static ExtendedRational pos_inf() { return {Kind::PosInf, Rational(0)}; }
  static ExtendedRational finite(Rational v) { return {Kind::Finite, std::move(v)}; }
};

/// Sturm chain of the primitive part of f; each member is reduced to its
/// primitive part with the sign of the true negated remainder preserved.
class SturmChain {
 public:
  explicit SturmChain(const RatPolynomial& f);

  const std::vector<IntPolynomial>& members() const { return chain_; }
  int sign_variations(const ExtendedRational& x) const;
  std::vector<int> signs_at(const ExtendedRational& x) const;

  /// Distinct real roots in the open interval (lo, hi).
  long count(const ExtendedRational& lo, const ExtendedRational& hi) const;

 private:
  std::vector<IntPolynomial> chain_;
};

/// Exact count of distinct real roots of f in (lo, hi).
/// Throws invalid-input on the zero polynomial or lo >= hi, and endpoint-root
/// when a finite endpoint is a root (the caller perturbs and retries).
long sturm_count(const RatPolynomial& f, const ExtendedRational& lo, const ExtendedRational& hi);
long sturm_count(const RatPolynomial& f);

/// 1 + max |a_i / a_n|: every complex root has modulus below this.
Rational cauchy_bound(const RatPolynomial& f);

/// Disjoint open rational intervals, one per distinct real root, each of
/// width at most max_width.
std::vector<std::pair<Rational, Rational>> isolate_real_roots(const RatPolynomial& f, const Rational& max_width);

/// All rational roots, found by isolating real roots and testing the finitely
/// many fractions whose denominator divides the leading coefficient.
std::vector<Rational> rational_roots(const RatPolynomial& f);

/// Compact record of a Sturm computation, enough to re-check it.
nlohmann::json sturm_summary(const RatPolynomial& f);

}  // namespace torusforge::exactalg
