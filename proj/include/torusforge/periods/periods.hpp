#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <vector>

#include "torusforge/exactalg/matrix.hpp"
#include "torusforge/exactalg/polynomial.hpp"
#include "torusforge/exactalg/real.hpp"

namespace torusforge::periods {

using exactalg::Complex;
using exactalg::RationalMatrix;
using exactalg::RatPolynomial;
using exactalg::Real;
using exactalg::RealMatrix;

inline constexpr long kMinPrecision = 128;
inline constexpr long kMaxPrecision = 4096;

struct CertifiedRoot {
  Complex value;
  /// The disk of this radius around value contains exactly one root.
  Real error_radius;
  std::size_t conjugate_partner = 0;
  bool is_real = false;
};

/// All roots of a squarefree f, sorted by real part then imaginary part.
/// Aberth-Ehrlich from a jittered circle (seed only moves the start), then
/// Newton at the working precision. Results do not depend on the seed.
std::vector<CertifiedRoot> complex_roots(const RatPolynomial& f, long precision, std::uint64_t seed = 0);

/// Multiplication by x in the basis 1, x, ..., x^(n-1) of Q[x]/(f), using
/// the monic normalization: C e_k = e_(k+1), last column -a_0..-a_(n-1).
RationalMatrix companion_matrix(const RatPolynomial& f);

/// Block diagonal with g blocks [[0,-1],[1,0]]: multiplication by i in
/// coordinates (Re z_1, Im z_1, ..., Re z_g, Im z_g).
RealMatrix standard_complex_structure(long g, mpfr_prec_t bits);
/// S^-1 J0 S for a rational basis S (columns).
RationalMatrix rational_complex_structure(const RationalMatrix& basis);

enum class LatticeKind { Polynomial, RationalBasis, RandomBasis };

/// Enough to rebuild a lattice at any precision.
struct LatticeSource {
  LatticeKind kind = LatticeKind::Polynomial;
  RatPolynomial f;
  unsigned long embedding_bitmask = 0;
  RationalMatrix basis;
  long g = 0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

struct PeriodLattice {
  long g = 0;
  LatticeSource source;
  long precision = 0;
  mpfr_prec_t working_bits = 0;
  /// Only for polynomial sources.
  std::vector<CertifiedRoot> roots;
  std::vector<Complex> embedding;
  Rational leading_coefficient = 1;
  bool has_companion = false;
  RationalMatrix companion;
  /// Columns are the lattice basis vectors in real coordinates.
  RealMatrix basis;
  /// Complex structure in lattice coordinates: S^-1 J0 S.
  RealMatrix j;
  double log2_condition = 0;
  double j_square_residual_log2 = 0;
  double commutator_residual_log2 = 0;

  nlohmann::json to_json() const;
};

/// Lattice Z[x~] of Q[x]/(f) embedded by the g upper-half roots (bit k of
/// the mask swaps the k-th root for its conjugate). Throws dependency when f
/// has real roots and precision-exhausted when invariants cannot be met.
PeriodLattice build_period_lattice(const RatPolynomial& f, long precision, unsigned long embedding_bitmask = 0,
                                   std::uint64_t seed = 0);
/// Lattice with an exact rational basis (columns) of R^(2g).
PeriodLattice lattice_from_rational_basis(const RationalMatrix& basis, long precision);
/// Basis with pseudo-random entries in [-1, 1); higher precision extends the
/// same binary expansions.
PeriodLattice random_period_lattice(long g, std::uint64_t seed, long precision);
PeriodLattice rebuild(const LatticeSource& source, long precision);

}  // namespace torusforge::periods
