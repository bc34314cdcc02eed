#include "torusforge/toruslab/toruslab.hpp"

#include <cmath>
#include <limits>

#include "torusforge/error.hpp"
#include "torusforge/exactalg/hermite.hpp"

namespace torusforge::toruslab {

using exactalg::Matrix;
using exactalg::Real;
using exactalg::RealMatrix;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

nlohmann::json log2_json(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  return v;
}

std::size_t variable_count(LatticeKind kind, std::size_t n) {
  return kind == LatticeKind::NeronSeveri ? n * (n - 1) / 2 : n * n;
}

/// Rows index the entries of the defining condition, columns the unknowns.
template <typename T>
Matrix<T> constraint_matrix(const Matrix<T>& j, LatticeKind kind, const T& zero, const T& one) {
  const std::size_t n = j.rows();
  switch (kind) {
    case LatticeKind::Endomorphism: {
      // (MJ - JM)_rc = sum_k M_rk J_kc - J_rk M_kc.
      Matrix<T> a(n * n, n * n, zero);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t jj = 0; jj < n; ++jj) {
          const std::size_t var = i * n + jj;
          for (std::size_t c = 0; c < n; ++c) a(i * n + c, var) += j(jj, c);
          for (std::size_t r = 0; r < n; ++r) a(r * n + jj, var) -= j(r, i);
        }
      return a;
    }
    case LatticeKind::HomDual: {
      // (J^T B J - B)_rc = sum J_ir B_ij J_jc - B_rc.
      Matrix<T> a(n * n, n * n, zero);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t jj = 0; jj < n; ++jj) {
          const std::size_t var = i * n + jj;
          for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) a(r * n + c, var) += j(i, r) * j(jj, c);
          a(var, var) -= one;
        }
      return a;
    }
    case LatticeKind::NeronSeveri: {
      // Unknowns b_ij (i < j) with B_ji = -b_ij; J^T B J - B is again
      // alternating, so its upper triangle is the whole condition.
      const std::size_t m = n * (n - 1) / 2;
      Matrix<T> a(m, m, zero);
      std::size_t var = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t jj = i + 1; jj < n; ++jj, ++var) {
          std::size_t row = 0;
          for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = r + 1; c < n; ++c, ++row) {
              a(row, var) += j(i, r) * j(jj, c);
              a(row, var) -= j(jj, r) * j(i, c);
            }
          a(var, var) -= one;
        }
      return a;
    }
  }
  throw Error(ErrorKind::Internal, "unknown lattice kind");
}

RealMatrix real_constraints(const PeriodLattice& l, LatticeKind kind) {
  return constraint_matrix(l.j, kind, Real(l.working_bits), Real(1L, l.working_bits));
}

double residual_log2(const RealMatrix& a, const IntVector& v) {
  Real worst(a.rows() ? a(0, 0).precision() : 64);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    Real acc(worst.precision());
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] != 0) acc += a(r, i) * Real(v[i], worst.precision());
    worst = max(worst, acc.abs());
  }
  double lg = worst.log2_abs();
  return std::isfinite(lg) ? lg : -kInf;
}

IntegerMatrix to_matrix(const IntVector& v, LatticeKind kind, std::size_t n) {
  IntVector full = kind == LatticeKind::NeronSeveri ? alternating_to_full(v, n) : v;
  IntegerMatrix m(n, n, Integer(0));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = full[r * n + c];
  return m;
}

IntVector identity_vector(std::size_t n) {
  IntVector v(n * n, Integer(0));
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1;
  return v;
}

void fill_generators(RankReport& report, std::size_t n) {
  report.rank = report.hnf.size();
  report.generators.clear();
  for (const auto& v : report.hnf) report.generators.push_back(to_matrix(v, report.kind, n));
}

void attach_witnesses(RankReport& report, const PeriodLattice& l) {
  report.witnesses.clear();
  report.all_in_qc = false;
  if (report.kind != LatticeKind::Endomorphism || !l.has_companion) return;
  report.all_in_qc = true;
  for (const auto& m : report.generators) {
    report.witnesses.push_back(verify_in_QC(m, l.companion));
    if (!report.witnesses.back().q_coefficients) report.all_in_qc = false;
  }
}

RankReport two_precision_report(const PeriodLattice& coarse, const PeriodLattice& fine, LatticeKind kind,
                                const LabOptions& options) {
  const std::size_t n = static_cast<std::size_t>(2 * coarse.g);
  RankReport report;
  report.kind = kind;
  report.method = Method::NearKernel;
  report.precision = coarse.precision;
  report.check_precision = fine.precision;

  std::vector<std::vector<IntVector>> hnfs;
  RealMatrix coarse_a;
  report.shortest_rejected_log2 = kInf;
  for (const PeriodLattice* l : {&coarse, &fine}) {
    RealMatrix a = real_constraints(*l, kind);
    exactalg::NearKernel nk =
        exactalg::integer_near_kernel(a, exactalg::default_kernel_scale(l->precision),
                                      exactalg::default_residual_tolerance(l->precision), options.lll_delta,
                                      l->precision + 64);
    report.shortest_rejected_log2 = std::min(report.shortest_rejected_log2, nk.shortest_rejected_log2);
    hnfs.push_back(exactalg::hermite_normal_form(nk.generators));
    if (l == &coarse) {
      report.tolerance_log2 = nk.tolerance_log2;
      coarse_a = std::move(a);
    }
    report.runs.push_back(std::move(nk));
  }
  report.hnf = hnfs[0];
  report.agreement = hnfs[0] == hnfs[1];
  if (kind == LatticeKind::Endomorphism && !exactalg::lattice_contains(report.hnf, identity_vector(n)))
    report.agreement = false;
  for (const auto& v : report.hnf) report.residual_log2.push_back(residual_log2(coarse_a, v));
  fill_generators(report, n);
  report.rank_zero_certified =
      report.rank == 0 && report.agreement && report.shortest_rejected_log2 > static_cast<double>(coarse.precision) / 8;
  return report;
}

RankReport endomorphism_from(PeriodLattice coarse, PeriodLattice fine, const LabOptions& options) {
  while (true) {
    RankReport report = two_precision_report(coarse, fine, LatticeKind::Endomorphism, options);
    attach_witnesses(report, coarse);
    const bool settled = !coarse.has_companion || (report.agreement && report.all_in_qc);
    if (settled || 2 * fine.precision > options.max_precision) return report;
    coarse = std::move(fine);
    fine = periods::rebuild(coarse.source, 2 * coarse.precision);
  }
}

PeriodLattice doubled(const PeriodLattice& l) { return periods::rebuild(l.source, 2 * l.precision); }

}  // namespace

std::string to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::Endomorphism: return "endomorphism";
    case LatticeKind::NeronSeveri: return "neron-severi";
    case LatticeKind::HomDual: return "hom-dual";
  }
  return "unknown";
}

IntVector alternating_to_full(const IntVector& v, std::size_t n) {
  if (v.size() != n * (n - 1) / 2) throw Error(ErrorKind::InvalidInput, "alternating coordinate count mismatch");
  IntVector full(n * n, Integer(0));
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      full[i * n + j] = v[k];
      full[j * n + i] = -v[k];
    }
  return full;
}

EndomorphismWitness verify_in_QC(const IntegerMatrix& m, const RationalMatrix& c) {
  const std::size_t n = c.rows();
  if (m.rows() != n || m.cols() != n || c.cols() != n)
    throw Error(ErrorKind::InvalidInput, "verify_in_QC needs square matrices of equal size");
  EndomorphismWitness w;
  w.matrix = m;
  // Columns of the system are vec(C^k).
  RationalMatrix system(n * n, n, Rational(0));
  RationalMatrix power = exactalg::identity_rational(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t col = 0; col < n; ++col) system(r * n + col, k) = power(r, col);
    power = power * c;
  }
  std::vector<Rational> rhs;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t col = 0; col < n; ++col) rhs.emplace_back(m(r, col));
  w.q_coefficients = exactalg::solve(system, rhs);
  return w;
}

RankReport endomorphism_lattice(const PeriodLattice& l, const LabOptions& options) {
  return endomorphism_from(l, doubled(l), options);
}

RankReport neron_severi_rank(const PeriodLattice& l, const LabOptions& options) {
  return two_precision_report(l, doubled(l), LatticeKind::NeronSeveri, options);
}

RankReport hom_dual_rank(const PeriodLattice& l, const LabOptions& options) {
  return two_precision_report(l, doubled(l), LatticeKind::HomDual, options);
}

RankReport exact_rank(const PeriodLattice& l, LatticeKind kind) {
  if (l.source.kind != periods::LatticeKind::RationalBasis)
    throw Error(ErrorKind::Unsupported, "exact ranks need a lattice with a rational basis");
  const std::size_t n = static_cast<std::size_t>(2 * l.g);
  RationalMatrix j = periods::rational_complex_structure(l.source.basis);
  RationalMatrix a = constraint_matrix(j, kind, Rational(0), Rational(1));
  const std::size_t m = a.rows();
  const std::size_t vars = variable_count(kind, n);

  // Integer kernel via the HNF of rows (A^T e_i | e_i): the rows whose
  // pivot lies past the first m columns span {(0, v) : A v = 0}.
  std::vector<Integer> row_scale(m, Integer(1));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < vars; ++c) row_scale[r] = lcm(row_scale[r], Integer(a(r, c).get_den()));
  std::vector<IntVector> rows(vars, IntVector(m + vars, Integer(0)));
  for (std::size_t i = 0; i < vars; ++i) {
    for (std::size_t r = 0; r < m; ++r) {
      Rational scaled = a(r, i) * Rational(row_scale[r]);
      rows[i][r] = scaled.get_num();
    }
    rows[i][m + i] = 1;
  }
  std::vector<IntVector> tails;
  for (const auto& row : exactalg::hermite_normal_form(rows)) {
    bool head_zero = true;
    for (std::size_t r = 0; r < m; ++r)
      if (row[r] != 0) head_zero = false;
    if (head_zero) tails.emplace_back(row.begin() + static_cast<long>(m), row.end());
  }

  RankReport report;
  report.kind = kind;
  report.method = Method::Exact;
  report.precision = l.precision;
  report.agreement = true;
  report.tolerance_log2 = -kInf;
  report.shortest_rejected_log2 = kInf;
  report.hnf = exactalg::hermite_normal_form(tails);
  report.residual_log2.assign(report.hnf.size(), -kInf);
  fill_generators(report, n);
  report.rank_zero_certified = report.rank == 0;
  return report;
}

nlohmann::json EndomorphismWitness::to_json() const {
  nlohmann::json j;
  j["matrix"] = exactalg::to_json(matrix);
  if (q_coefficients) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& q : *q_coefficients) a.push_back(exactalg::to_decimal(q));
    j["q_coefficients"] = a;
  } else {
    j["q_coefficients"] = nullptr;
  }
  return j;
}

nlohmann::json RankReport::to_json() const {
  nlohmann::json j;
  j["kind"] = to_string(kind);
  j["method"] = method == Method::Exact ? "exact" : "near-kernel";
  j["rank"] = rank;
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : generators) gens.push_back(exactalg::to_json(g));
  j["generators"] = gens;
  nlohmann::json res = nlohmann::json::array();
  for (double r : residual_log2) res.push_back(log2_json(r));
  j["residual_log2"] = res;
  j["tolerance_log2"] = log2_json(tolerance_log2);
  j["precisions"] = {precision, check_precision};
  j["agreement"] = agreement;
  j["shortest_rejected_log2"] = log2_json(shortest_rejected_log2);
  j["rank_zero_certified"] = rank_zero_certified;
  if (kind == LatticeKind::Endomorphism && !witnesses.empty()) {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& x : witnesses) w.push_back(x.to_json());
    j["witnesses"] = w;
    j["all_in_qc"] = all_in_qc;
  }
  if (!runs.empty()) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& x : runs) r.push_back({{"lll_method", x.lll_method}, {"rank", x.generators.size()}});
    j["runs"] = r;
  }
  return j;
}

AutomorphismReport automorphism_report(const PeriodLattice& l, const RankReport& endo,
                                       const certify::Certificate& torsion_units) {
  if (l.g < 2) throw Error(ErrorKind::Dependency, "automorphism structure needs g >= 2");
  if (endo.kind != LatticeKind::Endomorphism || endo.rank != static_cast<std::size_t>(2 * l.g) || !endo.all_in_qc)
    throw Error(ErrorKind::Dependency, "endomorphism lattice is not a verified order of rank 2g");
  if (torsion_units.kind != certify::CertificateKind::TorsionUnits || !torsion_units.certified())
    throw Error(ErrorKind::Dependency, "torsion units are not certified to be {1, -1}");
  AutomorphismReport r;
  r.torsion = "Z/2";
  r.free_rank = l.g - 1;
  return r;
}

nlohmann::json AutomorphismReport::to_json() const { return {{"torsion", torsion}, {"free_rank", free_rank}}; }

TorusAnalysis analyze(const PeriodLattice& l, const LabOptions& options) { return analyze(l, doubled(l), options); }

TorusAnalysis analyze(const PeriodLattice& l, const PeriodLattice& fine, const LabOptions& options) {
  if (fine.g != l.g || fine.precision <= l.precision)
    throw Error(ErrorKind::InvalidInput, "check lattice must be the same torus at a higher precision");
  TorusAnalysis out;
  out.endomorphism = endomorphism_from(l, fine, options);
  out.neron_severi = two_precision_report(l, fine, LatticeKind::NeronSeveri, options);
  out.hom_dual = two_precision_report(l, fine, LatticeKind::HomDual, options);
  const std::size_t n = static_cast<std::size_t>(2 * l.g);
  std::vector<IntVector> ns_full;
  for (const auto& v : out.neron_severi.hnf) ns_full.push_back(alternating_to_full(v, n));
  out.ns_in_hom_dual = exactalg::lattice_contains(out.hom_dual.hnf, ns_full);
  return out;
}

TorusAnalysis analyze_exact(const PeriodLattice& l) {
  TorusAnalysis out;
  out.endomorphism = exact_rank(l, LatticeKind::Endomorphism);
  out.neron_severi = exact_rank(l, LatticeKind::NeronSeveri);
  out.hom_dual = exact_rank(l, LatticeKind::HomDual);
  const std::size_t n = static_cast<std::size_t>(2 * l.g);
  std::vector<IntVector> ns_full;
  for (const auto& v : out.neron_severi.hnf) ns_full.push_back(alternating_to_full(v, n));
  out.ns_in_hom_dual = exactalg::lattice_contains(out.hom_dual.hnf, ns_full);
  return out;
}

nlohmann::json TorusAnalysis::to_json() const {
  return {{"endomorphism", endomorphism.to_json()},
          {"neron_severi", neron_severi.to_json()},
          {"hom_dual", hom_dual.to_json()},
          {"ns_in_hom_dual", ns_in_hom_dual}};
}

}  // namespace torusforge::toruslab
