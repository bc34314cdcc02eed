#pragma once

#include <cstdint>
#include <vector>

#include "torusforge/certify/certificate.hpp"
#include "torusforge/exactalg/finite_field.hpp"
#include "torusforge/families/families.hpp"

namespace torusforge::certify {

using exactalg::FactorPattern;
using exactalg::RatPolynomial;

struct CertifyOptions {
  /// Number of squarefree (good) primes examined, ascending from 2.
  std::size_t prime_budget = 100;
};

/// Squarefree degree patterns at the first `budget` good primes. Primes
/// dividing a denominator or the leading coefficient, and primes where f is
/// not squarefree, are skipped and not counted.
std::vector<FactorPattern> frobenius_scan(const RatPolynomial& f, std::size_t budget);
/// Patterns at the listed primes that are good and squarefree, in order.
std::vector<FactorPattern> frobenius_scan(const RatPolynomial& f, const std::vector<std::uint64_t>& primes);

/// Degrees d with 0 < d < n that remain possible factor degrees of f over Q
/// given the patterns (subset sums) and whether f has a rational root.
std::vector<long> possible_factor_degrees(long n, const std::vector<FactorPattern>& patterns, bool has_rational_root);

Certificate certify_purely_imaginary(const RatPolynomial& f);
Certificate certify_irreducible(const RatPolynomial& f, const CertifyOptions& options = {});
/// Throws dependency unless `irreducible` is a certified Irreducible
/// certificate for f.
Certificate certify_primitive(const RatPolynomial& f, const Certificate& irreducible, const CertifyOptions& options = {});
Certificate certify_no_proper_subfield(const Certificate& irreducible, const Certificate& primitive);
/// deg f >= 4 and a certified NoProperSubfield certificate are required.
Certificate certify_torsion_units(const Certificate& no_proper_subfield);
/// Bundles {Irreducible, PurelyImaginary, NoProperSubfield, TorsionUnits}.
/// When a component cannot be certified the bundle is Refuted if a
/// refutation exists (including f sharing a factor with some x^m - 1 with
/// phi(m) = deg f), Inconclusive otherwise.
Certificate certify_special(const RatPolynomial& f, const CertifyOptions& options = {});
/// Same bundle for the quadruple's trinomial; the PurelyImaginary component
/// also records the Sturm real-root threshold for (g, l, p, b) next to both
/// closed-form estimates, and verification recomputes them.
Certificate certify_special(const families::AdmissibleQuadruple& q, const CertifyOptions& options = {});

/// Sturm max_c for q's (g, l, p, b) with both closed forms, and whether the
/// largest integer strictly below each closed form equals max_c.
nlohmann::json real_root_threshold_record(const families::AdmissibleQuadruple& q);

/// m with phi(m) = n.
std::vector<std::uint64_t> cyclotomic_indices(std::uint64_t n);

}  // namespace torusforge::certify
