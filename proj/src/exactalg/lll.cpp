#include "torusforge/exactalg/lll.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>

#include "torusforge/error.hpp"
#include "torusforge/exactalg/real.hpp"

namespace torusforge::exactalg {

namespace {

Integer dot(const IntVector& a, const IntVector& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) mpz_addmul(s.get_mpz_t(), a[i].get_mpz_t(), b[i].get_mpz_t());
  return s;
}

void axpy(IntVector& target, const Integer& x, const IntVector& source) {
  // target -= x * source
  for (std::size_t i = 0; i < target.size(); ++i) mpz_submul(target[i].get_mpz_t(), x.get_mpz_t(), source[i].get_mpz_t());
}

void divexact(Integer& z, const Integer& d) { mpz_divexact(z.get_mpz_t(), z.get_mpz_t(), d.get_mpz_t()); }

void check_shape(const std::vector<IntVector>& basis) {
  if (basis.empty()) return;
  const std::size_t dim = basis.front().size();
  for (const auto& v : basis)
    if (v.size() != dim) throw Error(ErrorKind::InvalidInput, "lattice vectors of unequal length");
  if (basis.size() > dim) throw Error(ErrorKind::RankDeficient, "more vectors than the ambient dimension");
}

std::vector<IntVector> identity_rows(std::size_t n) {
  std::vector<IntVector> u(n, IntVector(n, Integer(0)));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  return u;
}

IntegerMatrix to_matrix(const std::vector<IntVector>& rows) {
  const std::size_t n = rows.size();
  IntegerMatrix m(n, n, Integer(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  return m;
}

// Nearest integer to a/b for b > 0, ties rounded up.
Integer nearest_quotient(const Integer& a, const Integer& b) {
  Integer num = 2 * a + b;
  Integer den = 2 * b;
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

// ---------------------------------------------------------------- exact LLL

void exact_lll(std::vector<IntVector>& b, std::vector<IntVector>& h, const Rational& delta) {
  const std::size_t n = b.size();
  if (n <= 1) return;
  const Integer p = delta.get_num();
  const Integer q = delta.get_den();
  std::vector<Integer> d(n + 1, Integer(0));
  std::vector<std::vector<Integer>> lam(n, std::vector<Integer>(n, Integer(0)));
  d[0] = 1;
  d[1] = dot(b[0], b[0]);
  if (d[1] == 0) throw Error(ErrorKind::RankDeficient, "zero vector in basis");

  auto red = [&](std::size_t k, std::size_t l) {
    Integer twice = 2 * abs(lam[k][l]);
    if (twice <= d[l + 1]) return;
    Integer x = nearest_quotient(lam[k][l], d[l + 1]);
    axpy(b[k], x, b[l]);
    axpy(h[k], x, h[l]);
    lam[k][l] -= x * d[l + 1];
    for (std::size_t i = 0; i < l; ++i) lam[k][i] -= x * lam[l][i];
  };

  std::size_t k = 1;
  std::size_t kmax = 0;
  while (k < n) {
    if (k > kmax) {
      kmax = k;
      for (std::size_t j = 0; j <= k; ++j) {
        Integer u = dot(b[k], b[j]);
        for (std::size_t l = 0; l < j; ++l) {
          u = d[l + 1] * u - lam[k][l] * lam[j][l];
          divexact(u, d[l]);
        }
        if (j < k) {
          lam[k][j] = u;
        } else {
          if (u == 0) throw Error(ErrorKind::RankDeficient, "lattice vectors are linearly dependent");
          d[k + 1] = u;
        }
      }
    }
    red(k, k - 1);
    if (q * d[k + 1] * d[k - 1] < p * d[k] * d[k] - q * lam[k][k - 1] * lam[k][k - 1]) {
      std::swap(b[k], b[k - 1]);
      std::swap(h[k], h[k - 1]);
      for (std::size_t j = 0; j + 1 < k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
      const Integer l = lam[k][k - 1];
      Integer bb = d[k - 1] * d[k + 1] + l * l;
      divexact(bb, d[k]);
      for (std::size_t i = k + 1; i <= kmax; ++i) {
        Integer t = lam[i][k];
        Integer a = d[k + 1] * lam[i][k - 1] - l * t;
        divexact(a, d[k]);
        lam[i][k] = a;
        Integer c = bb * t + l * lam[i][k];
        divexact(c, d[k + 1]);
        lam[i][k - 1] = c;
      }
      d[k] = bb;
      if (k > 1) --k;
    } else {
      for (std::size_t l = k - 1; l-- > 0;) red(k, l);
      ++k;
    }
  }
}

// ------------------------------------------------------------- floating LLL

struct LongDoubleArith {
  using T = long double;
  T from(const Integer& z) const {
    const std::size_t bits = mpz_sizeinbase(z.get_mpz_t(), 2);
    if (bits <= 63) return static_cast<T>(z.get_si());
    Integer top;
    const long shift = static_cast<long>(bits) - 63;
    mpz_tdiv_q_2exp(top.get_mpz_t(), z.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
    return std::ldexp(static_cast<T>(top.get_si()), static_cast<int>(shift));
  }
  T constant(double x) const { return static_cast<T>(x); }
  T abs(const T& x) const { return std::fabs(x); }
  Integer round(const T& x) const {
    T r = std::round(x);
    if (std::fabs(r) < 0x1p62L) return Integer(static_cast<long>(r));
    int e = 0;
    T mant = std::frexp(r, &e);
    Integer z(static_cast<long>(std::ldexp(mant, 62)));
    if (e > 62) {
      mpz_mul_2exp(z.get_mpz_t(), z.get_mpz_t(), static_cast<mp_bitcnt_t>(e - 62));
    }
    return z;
  }
  bool finite(const T& x) const { return std::isfinite(x); }
};

struct MpfrArith {
  using T = Real;
  mpfr_prec_t bits;
  T from(const Integer& z) const { return Real(z, bits); }
  T constant(double x) const {
    Real r(bits);
    mpfr_set_d(r.get(), x, MPFR_RNDN);
    return r;
  }
  T abs(const T& x) const { return x.abs(); }
  Integer round(const T& x) const { return x.round_to_integer(); }
  bool finite(const T& x) const { return mpfr_number_p(x.get()) != 0; }
};

// Size reduction is lazy: row k of (r, mu) is always recomputed from the exact
// Gram matrix, so floating error never accumulates across iterations.
template <typename Arith>
bool floating_lll(std::vector<IntVector>& b, std::vector<IntVector>& h, double delta, double eta, const Arith& ar) {
  using T = typename Arith::T;
  const std::size_t n = b.size();
  if (n <= 1) return true;
  std::vector<std::vector<Integer>> g(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) g[i][j] = g[j][i] = dot(b[i], b[j]);

  const T zero = ar.constant(0.0);
  std::vector<std::vector<T>> r(n, std::vector<T>(n, zero));
  std::vector<std::vector<T>> mu(n, std::vector<T>(n, zero));
  const T t_delta = ar.constant(delta);
  const T t_eta = ar.constant(eta);

  std::size_t max_bits = 1;
  for (const auto& row : b)
    for (const auto& x : row) max_bits = std::max(max_bits, mpz_sizeinbase(x.get_mpz_t(), 2));
  const std::uint64_t swap_cap = 64ULL * n * n * (max_bits + 64);
  std::uint64_t swaps = 0;

  r[0][0] = ar.from(g[0][0]);
  std::size_t k = 1;
  while (k < n) {
    for (int pass = 0;; ++pass) {
      if (pass > 400) return false;
      bool reduced = true;
      for (std::size_t j = 0; j < k; ++j) {
        T acc = ar.from(g[k][j]);
        for (std::size_t i = 0; i < j; ++i) acc -= mu[j][i] * r[k][i];
        r[k][j] = acc;
        mu[k][j] = acc / r[j][j];
        if (!ar.finite(mu[k][j])) return false;
        if (ar.abs(mu[k][j]) > t_eta) reduced = false;
      }
      if (reduced) break;
      for (std::size_t j = k; j-- > 0;) {
        Integer x = ar.round(mu[k][j]);
        if (x == 0) continue;
        axpy(b[k], x, b[j]);
        axpy(h[k], x, h[j]);
        const T tx = ar.from(x);
        for (std::size_t i = 0; i < j; ++i) mu[k][i] -= tx * mu[j][i];
        mu[k][j] -= tx;
        // Exact Gram update for b_k <- b_k - x b_j.
        g[k][k] += x * x * g[j][j] - 2 * x * g[k][j];
        for (std::size_t i = 0; i < n; ++i) {
          if (i == k) continue;
          g[k][i] -= x * g[j][i];
          g[i][k] = g[k][i];
        }
      }
    }
    T rkk = ar.from(g[k][k]);
    for (std::size_t j = 0; j < k; ++j) rkk -= mu[k][j] * r[k][j];
    r[k][k] = rkk;
    const T projected = rkk + mu[k][k - 1] * r[k][k - 1];
    if (t_delta * r[k - 1][k - 1] <= projected) {
      ++k;
      continue;
    }
    if (++swaps > swap_cap) return false;
    std::swap(b[k], b[k - 1]);
    std::swap(h[k], h[k - 1]);
    std::swap(g[k], g[k - 1]);
    for (auto& row : g) std::swap(row[k], row[k - 1]);
    if (k > 1) {
      --k;
    } else {
      r[0][0] = ar.from(g[0][0]);
      if (g[0][0] == 0) throw Error(ErrorKind::RankDeficient, "zero vector produced during reduction");
    }
  }
  return true;
}

bool verify(const std::vector<IntVector>& input, const std::vector<IntVector>& out, const std::vector<IntVector>& h,
            const Rational& delta) {
  const std::size_t n = input.size();
  const std::size_t dim = n == 0 ? 0 : input.front().size();
  for (std::size_t i = 0; i < n; ++i) {
    IntVector v(dim, Integer(0));
    for (std::size_t j = 0; j < n; ++j) {
      if (h[i][j] == 0) continue;
      for (std::size_t c = 0; c < dim; ++c) mpz_addmul(v[c].get_mpz_t(), h[i][j].get_mpz_t(), input[j][c].get_mpz_t());
    }
    if (v != out[i]) return false;
  }
  if (abs(determinant(to_matrix(h))) != 1) return false;
  return is_lll_reduced(out, delta);
}

}  // namespace

IntegralGramSchmidt integral_gram_schmidt(const std::vector<IntVector>& basis) {
  check_shape(basis);
  const std::size_t n = basis.size();
  IntegralGramSchmidt gs;
  gs.d.assign(n + 1, Integer(0));
  gs.d[0] = 1;
  gs.lambda.assign(n, std::vector<Integer>(n, Integer(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      Integer u = dot(basis[i], basis[j]);
      for (std::size_t l = 0; l < j; ++l) {
        u = gs.d[l + 1] * u - gs.lambda[i][l] * gs.lambda[j][l];
        divexact(u, gs.d[l]);
      }
      if (j < i) {
        gs.lambda[i][j] = u;
      } else {
        if (u == 0) throw Error(ErrorKind::RankDeficient, "lattice vectors are linearly dependent");
        gs.d[i + 1] = u;
      }
    }
  }
  return gs;
}

bool is_lll_reduced(const std::vector<IntVector>& basis, const Rational& delta, const Rational& eta) {
  const auto gs = integral_gram_schmidt(basis);
  const std::size_t n = basis.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (abs(make_rational(gs.lambda[i][j], gs.d[j + 1])) > eta) return false;
  // B_k >= (delta - mu^2) B_{k-1}, with B_i = d[i+1]/d[i].
  for (std::size_t k = 1; k < n; ++k) {
    Rational bk = make_rational(gs.d[k + 1], gs.d[k]);
    Rational bk1 = make_rational(gs.d[k], gs.d[k - 1]);
    Rational m = make_rational(gs.lambda[k][k - 1], gs.d[k]);
    if (bk < (delta - m * m) * bk1) return false;
  }
  return true;
}

ReducedLattice lll_reduce(const std::vector<IntVector>& basis, const Rational& delta, LllMethod method) {
  if (delta <= Rational(1, 4) || delta >= 1) throw Error(ErrorKind::InvalidInput, "LLL delta must lie in (1/4, 1)");
  // Dependence is detected up front so every path reports it the same way.
  integral_gram_schmidt(basis);
  const std::size_t n = basis.size();

  ReducedLattice out;
  out.delta = delta;
  std::optional<std::pair<std::vector<IntVector>, std::vector<IntVector>>> result;

  auto attempt_floating = [&](auto arith, const char* label) {
    std::vector<IntVector> b = basis;
    std::vector<IntVector> h = identity_rows(n);
    // Stricter parameters in floating point leave slack for rounding.
    const double d = (delta.get_d() + 1.0) / 2.0;
    if (floating_lll(b, h, d, 0.501, arith) && verify(basis, b, h, delta)) {
      result.emplace(std::move(b), std::move(h));
      out.method = label;
    }
  };

  if (method != LllMethod::Exact) {
    attempt_floating(LongDoubleArith{}, "floating-long-double");
    if (!result) attempt_floating(MpfrArith{static_cast<mpfr_prec_t>(4 * n + 128)}, "floating-mpfr");
    if (!result && method == LllMethod::Floating) {
      throw Error(ErrorKind::Internal, "floating LLL did not produce a verifiable reduction");
    }
  }
  if (!result) {
    std::vector<IntVector> b = basis;
    std::vector<IntVector> h = identity_rows(n);
    exact_lll(b, h, delta);
    if (!verify(basis, b, h, delta)) throw Error(ErrorKind::Internal, "exact LLL failed verification");
    result.emplace(std::move(b), std::move(h));
    out.method = "exact-integral";
  }
  out.basis = std::move(result->first);
  out.transform = to_matrix(result->second);
  out.gram_schmidt = integral_gram_schmidt(out.basis);
  return out;
}

nlohmann::json ReducedLattice::to_json() const {
  nlohmann::json j;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& v : basis) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& x : v) row.push_back(x.get_str());
    rows.push_back(std::move(row));
  }
  j["basis"] = std::move(rows);
  j["transform"] = exactalg::to_json(transform);
  j["delta"] = to_decimal(delta);
  j["method"] = method;
  nlohmann::json dets = nlohmann::json::array();
  for (const auto& x : gram_schmidt.d) dets.push_back(x.get_str());
  j["gram_determinants"] = std::move(dets);
  return j;
}

}  // namespace torusforge::exactalg
