#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <vector>

#include "torusforge/exactalg/lll.hpp"
#include "torusforge/exactalg/matrix.hpp"
#include "torusforge/exactalg/real.hpp"

namespace torusforge::exactalg {

struct NearKernel {
  /// Integer vectors v with A v ~ 0; part of a basis of Z^n, hence saturated.
  std::vector<IntVector> generators;
  /// log2 ||A v||_inf per generator (-inf for an exact zero).
  std::vector<double> residual_log2;
  /// log2 of the tolerance actually applied: min(residual_tol, 1/scale).
  double tolerance_log2 = 0;
  /// log2 of the Euclidean norm of the shortest rejected reduced embedding
  /// vector; +inf when nothing was rejected.
  double shortest_rejected_log2 = 0;
  /// Smallest log2 residual among rejected vectors; +inf when none.
  double smallest_rejected_residual_log2 = 0;
  std::string lll_method;

  nlohmann::json to_json() const;
};

/// 2^(precision/2).
Integer default_kernel_scale(long precision);
/// 2^(-precision/4).
Real default_residual_tolerance(long precision);

/// Integer relations among the columns of A (m x n): builds the rows
/// [e_i | round(scale * A[:, i])], LLL-reduces them and keeps every reduced
/// vector whose integer part v has ||A v||_inf below the tolerance.
///
/// A spurious reduced vector has residual around scale^(-k/n) for some k >= 1,
/// which can dip under a fixed residual_tol; requiring the residual to be
/// below 1/scale as well rules those out.
///
/// certified_bits defaults to the smallest entry precision; throws precision
/// when log2(scale) + 64 exceeds it.
NearKernel integer_near_kernel(const RealMatrix& a, const Integer& scale, const Real& residual_tol,
                               const Rational& delta = Rational(99, 100),
                               std::optional<long> certified_bits = std::nullopt);

}  // namespace torusforge::exactalg
