#pragma once

#include "torusforge/exactalg/polynomial.hpp"

namespace torusforge::exactalg {

/// Exact resultant over Q by the Euclidean remainder sequence.
Rational resultant(const RatPolynomial& f, const RatPolynomial& g);

/// (-1)^(n(n-1)/2) res(f, f') / lc(f).
Rational discriminant(const RatPolynomial& f);

}  // namespace torusforge::exactalg
