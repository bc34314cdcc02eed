#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "torusforge/certify/certificate.hpp"
#include "torusforge/exactalg/lll.hpp"
#include "torusforge/exactalg/matrix.hpp"
#include "torusforge/exactalg/near_kernel.hpp"
#include "torusforge/periods/periods.hpp"

namespace torusforge::toruslab {

using exactalg::IntegerMatrix;
using exactalg::IntVector;
using exactalg::RationalMatrix;
using periods::PeriodLattice;

enum class LatticeKind { Endomorphism, NeronSeveri, HomDual };
std::string to_string(LatticeKind kind);

enum class Method {
  /// LLL near-kernel at two precisions.
  NearKernel,
  /// Exact elimination over Q followed by integer saturation. Needs a
  /// lattice with a rational basis.
  Exact,
};

struct EndomorphismWitness {
  IntegerMatrix matrix;
  /// M = sum a_k C^k, when such a_k exist.
  std::optional<std::vector<Rational>> q_coefficients;

  nlohmann::json to_json() const;
};

struct RankReport {
  LatticeKind kind = LatticeKind::Endomorphism;
  Method method = Method::NearKernel;
  std::size_t rank = 0;
  /// HNF basis of the lattice, as 2g x 2g matrices.
  std::vector<IntegerMatrix> generators;
  /// Same lattice as coordinate vectors in the kind's own variable space
  /// (alternating forms use the upper triangle).
  std::vector<IntVector> hnf;
  /// log2 sup-norm of the defining condition per generator, coarse run.
  std::vector<double> residual_log2;
  double tolerance_log2 = 0;
  long precision = 0;
  long check_precision = 0;
  bool agreement = false;
  /// Smallest log2 norm among rejected reduced vectors over both runs.
  double shortest_rejected_log2 = 0;
  /// rank 0, agreement, and the shortest rejected vector above 2^(P/8).
  bool rank_zero_certified = false;
  /// Endomorphisms only: exact Q[C] membership of every generator.
  std::vector<EndomorphismWitness> witnesses;
  bool all_in_qc = false;
  std::vector<exactalg::NearKernel> runs;

  nlohmann::json to_json() const;
};

struct LabOptions {
  Rational lll_delta = Rational(99, 100);
  /// Endomorphism candidates that fail exact Q[C] verification trigger a
  /// precision doubling up to this cap.
  long max_precision = periods::kMaxPrecision;
};

/// M = sum a_k C^k solved exactly; absent when inconsistent.
EndomorphismWitness verify_in_QC(const IntegerMatrix& m, const RationalMatrix& c);

RankReport endomorphism_lattice(const PeriodLattice& l, const LabOptions& options = {});
RankReport neron_severi_rank(const PeriodLattice& l, const LabOptions& options = {});
RankReport hom_dual_rank(const PeriodLattice& l, const LabOptions& options = {});

/// Exact version for lattices with a rational basis.
RankReport exact_rank(const PeriodLattice& l, LatticeKind kind);

/// Alternating upper-triangle coordinates (i < j, row-major) to a full
/// 2g x 2g antisymmetric matrix, flattened as i * 2g + j.
IntVector alternating_to_full(const IntVector& v, std::size_t n);

struct AutomorphismReport {
  std::string torsion = "Z/2";
  long free_rank = 0;

  nlohmann::json to_json() const;
};

/// Dirichlet: a CM field of degree 2g has unit rank g - 1. Requires
/// endo.rank = 2g with every generator in Q[C] and a certified
/// torsion-units certificate; otherwise dependency.
AutomorphismReport automorphism_report(const PeriodLattice& l, const RankReport& endo,
                                       const certify::Certificate& torsion_units);

struct TorusAnalysis {
  RankReport endomorphism;
  RankReport neron_severi;
  RankReport hom_dual;
  /// NS lattice inside the HomDual lattice, checked on the HNF bases.
  bool ns_in_hom_dual = false;

  nlohmann::json to_json() const;
};

TorusAnalysis analyze(const PeriodLattice& l, const LabOptions& options = {});
/// Same, with the check lattice supplied (normally l rebuilt at 2P).
TorusAnalysis analyze(const PeriodLattice& l, const PeriodLattice& check, const LabOptions& options = {});
TorusAnalysis analyze_exact(const PeriodLattice& l);

}  // namespace torusforge::toruslab
