#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "torusforge/exactalg/matrix.hpp"
#include "torusforge/exactalg/numbers.hpp"

namespace torusforge::exactalg {

using IntVector = std::vector<Integer>;

enum class LllMethod {
  /// Floating Gram-Schmidt with exact verification, falling back to exact.
  Automatic,
  /// Integral (fraction-free) LLL; slow on large entries.
  Exact,
  /// Floating only; throws internal-error if the result does not verify.
  Floating,
};

/// Integral Gram-Schmidt data: d[i] = det of the leading i x i Gram minor
/// (d[0] = 1), lambda[i][j] = d[j+1] * mu_ij for j < i.
struct IntegralGramSchmidt {
  std::vector<Integer> d;
  std::vector<std::vector<Integer>> lambda;
};

/// Throws rank-deficient when the vectors are dependent.
IntegralGramSchmidt integral_gram_schmidt(const std::vector<IntVector>& basis);

struct ReducedLattice {
  std::vector<IntVector> basis;
  /// basis[i] = sum_j transform(i, j) * input[j]; det = +-1.
  IntegerMatrix transform;
  Rational delta;
  /// Exact Gram-Schmidt data of the reduced basis, used for verification.
  IntegralGramSchmidt gram_schmidt;
  std::string method;

  nlohmann::json to_json() const;
};

/// Size-reduction bound used by the verifier.
inline Rational lll_eta() { return Rational(51, 100); }

/// Exact check of |mu_ij| <= eta and the Lovasz condition for delta.
bool is_lll_reduced(const std::vector<IntVector>& basis, const Rational& delta, const Rational& eta = lll_eta());

/// LLL-reduces linearly independent integer vectors. The result is always
/// verified in exact arithmetic (reduction conditions, transform unimodular,
/// basis = transform * input) before it is returned.
ReducedLattice lll_reduce(const std::vector<IntVector>& basis, const Rational& delta = Rational(99, 100),
                          LllMethod method = LllMethod::Automatic);

}  // namespace torusforge::exactalg
