#include "torusforge/exactalg/near_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "torusforge/error.hpp"

namespace torusforge::exactalg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log2_norm(const IntVector& v) {
  Integer s = 0;
  for (const auto& x : v) mpz_addmul(s.get_mpz_t(), x.get_mpz_t(), x.get_mpz_t());
  if (s == 0) return -kInf;
  long e = 0;
  double m = mpz_get_d_2exp(&e, s.get_mpz_t());
  return 0.5 * (std::log2(m) + static_cast<double>(e));
}

void normalize_sign(IntVector& v) {
  for (const auto& x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : v) y = -y;
    return;
  }
}

nlohmann::json finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

Integer default_kernel_scale(long precision) {
  Integer s = 1;
  mpz_mul_2exp(s.get_mpz_t(), s.get_mpz_t(), static_cast<mp_bitcnt_t>(precision / 2));
  return s;
}

Real default_residual_tolerance(long precision) { return Real::pow2(-(precision / 4), 64); }

NearKernel integer_near_kernel(const RealMatrix& a, const Integer& scale, const Real& residual_tol,
                               const Rational& delta, std::optional<long> certified_bits) {
  if (scale <= 0) throw Error(ErrorKind::InvalidInput, "scale must be positive");
  if (residual_tol.sign() <= 0) throw Error(ErrorKind::InvalidInput, "residual tolerance must be positive");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (n == 0) throw Error(ErrorKind::InvalidInput, "constraint matrix has no columns");

  long bits = certified_bits.value_or(std::numeric_limits<long>::max());
  if (!certified_bits) {
    for (const auto& x : a.data()) bits = std::min<long>(bits, x.precision());
  }
  const long scale_bits = static_cast<long>(mpz_sizeinbase(scale.get_mpz_t(), 2));
  if (m > 0 && scale_bits + 64 > bits) {
    throw Error(ErrorKind::Precision, "scale 2^" + std::to_string(scale_bits) + " needs " +
                                          std::to_string(scale_bits + 64) + " certified bits, have " +
                                          std::to_string(bits));
  }
  const mpfr_prec_t work = static_cast<mpfr_prec_t>(std::max<long>(bits, 64) + scale_bits);

  std::vector<IntVector> rows(n, IntVector(n + m, Integer(0)));
  const Real s(scale, work);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i][i] = 1;
    for (std::size_t r = 0; r < m; ++r) rows[i][n + r] = (s * a(r, i)).round_to_integer();
  }
  const ReducedLattice reduced = lll_reduce(rows, delta);

  NearKernel out;
  out.lll_method = reduced.method;
  Real tol = residual_tol;
  {
    Real inv_scale = Real(1L, work) / Real(scale, work);
    if (inv_scale < tol) tol = inv_scale;
  }
  out.tolerance_log2 = tol.log2_abs();
  out.shortest_rejected_log2 = kInf;
  out.smallest_rejected_residual_log2 = kInf;

  for (const auto& row : reduced.basis) {
    IntVector v(row.begin(), row.begin() + static_cast<long>(n));
    Real worst(work);
    for (std::size_t r = 0; r < m; ++r) {
      Real acc(work);
      for (std::size_t i = 0; i < n; ++i) {
        if (v[i] == 0) continue;
        acc += a(r, i) * Real(v[i], work);
      }
      worst = max(worst, acc.abs());
    }
    if (worst < tol) {
      normalize_sign(v);
      out.generators.push_back(std::move(v));
      out.residual_log2.push_back(worst.log2_abs());
    } else {
      out.shortest_rejected_log2 = std::min(out.shortest_rejected_log2, log2_norm(row));
      out.smallest_rejected_residual_log2 = std::min(out.smallest_rejected_residual_log2, worst.log2_abs());
    }
  }
  return out;
}

nlohmann::json NearKernel::to_json() const {
  nlohmann::json j;
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& v : generators) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& x : v) row.push_back(x.get_str());
    gens.push_back(std::move(row));
  }
  j["generators"] = std::move(gens);
  nlohmann::json res = nlohmann::json::array();
  for (double r : residual_log2) res.push_back(finite_or_null(r));
  j["residual_log2"] = std::move(res);
  j["tolerance_log2"] = tolerance_log2;
  j["shortest_rejected_log2"] = finite_or_null(shortest_rejected_log2);
  j["smallest_rejected_residual_log2"] = finite_or_null(smallest_rejected_residual_log2);
  j["lll_method"] = lll_method;
  return j;
}

}  // namespace torusforge::exactalg
