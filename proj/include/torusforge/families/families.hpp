#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "torusforge/exactalg/polynomial.hpp"

namespace torusforge::families {

using exactalg::IntPolynomial;
using exactalg::RatPolynomial;

/// sum_{j<=n} x^j / j!
RatPolynomial truncated_exponential(long n);
/// n! * exp_n(x), monic with integer coefficients.
IntPolynomial scaled_truncated_exponential(long n);

/// x^(2g) + x + 1. Throws unsupported-parameter for g = 1 mod 3, where
/// x^2 + x + 1 divides it.
IntPolynomial selmer(long g);

/// (l, p, b, c) for a given g: l | 2g-1 prime, p = 1 mod 2g-1 prime,
/// b a primitive root mod p with l not dividing b, l not dividing c.
struct AdmissibleQuadruple {
  long g = 2;
  long l = 3;
  long p = 7;
  Integer b = 5;
  Integer c = -16;

  /// Throws invalid-quadruple naming the first failed predicate.
  void validate() const;
  nlohmann::json to_json() const;
  static AdmissibleQuadruple from_json(const nlohmann::json& j);
  friend bool operator==(const AdmissibleQuadruple&, const AdmissibleQuadruple&) = default;
};

/// x^(2g) - b x - p c / l^l, after validating q.
RatPolynomial quadruple_polynomial(const AdmissibleQuadruple& q);
/// Same polynomial without validation (used for c scans).
RatPolynomial quadruple_polynomial_unchecked(long g, long l, long p, const Integer& b, const Integer& c);

struct RealRootThreshold {
  /// Largest integer c for which the polynomial has no real roots, by exact
  /// Sturm counts.
  Integer max_c;
  /// l^l beta (b/2g - 1) / p with beta = (b/2g)^(1/(2g-1)).
  double threshold_minus_1 = 0;
  /// l^l beta (b/2g - b) / p: the value f(beta) = 0 actually gives.
  double threshold_minus_b = 0;
  nlohmann::json to_json() const;
};

/// Requires b > 0 and the (l, p, b) conditions of a quadruple.
RealRootThreshold max_c_without_real_roots(long g, long l, long p, const Integer& b);

struct QuadrupleContext {
  long g;
  long l;
  long p;
  Integer b;
};

/// c - N l p (or c - N l p ell^2) for the least N >= 0 that leaves no real
/// roots; keeps c's residues mod l p (and ell^2).
Integer adjust_c(const Integer& c, const QuadrupleContext& ctx, std::optional<long> ell = std::nullopt);

struct EnumerationBudget {
  /// Primes p strictly below this bound.
  long max_p = 200;
  /// Positive b up to and including this bound.
  long max_b = 50;
  /// Values of c emitted per (p, b, l), descending from max_c.
  long c_per_tuple = 1;
  std::size_t max_items = std::numeric_limits<std::size_t>::max();
};

/// Deterministic stream of real-root-free admissible quadruples ordered by
/// p ascending, then b, then l, then c descending from max_c. Only b > 0.
class QuadrupleEnumerator {
 public:
  QuadrupleEnumerator(long g, EnumerationBudget budget);
  std::optional<AdmissibleQuadruple> next();

 private:
  bool advance_tuple();

  long g_;
  EnumerationBudget budget_;
  std::vector<long> ls_;
  std::size_t emitted_ = 0;
  long p_ = 0;
  long b_ = 0;
  std::size_t l_index_ = 0;
  bool started_ = false;
  bool done_ = false;
  std::vector<Integer> pending_;
};

std::vector<AdmissibleQuadruple> enumerate_quadruples(long g, const EnumerationBudget& budget);

enum class FamilyKind { TruncatedExponential, Selmer, Quadruple };

std::string to_string(FamilyKind kind);
FamilyKind family_kind_from_string(const std::string& s);

struct FamilySpec {
  FamilyKind kind = FamilyKind::Selmer;
  long g = 2;
  std::optional<AdmissibleQuadruple> quadruple;

  /// The degree-2g polynomial of the family (exp_{2g} for the exponential kind).
  RatPolynomial polynomial() const;
  nlohmann::json to_json() const;
  static FamilySpec from_json(const nlohmann::json& j);
};

}  // namespace torusforge::families
