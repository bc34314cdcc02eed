#pragma once

#include <string>

#include "torusforge/exactalg/polynomial.hpp"
#include "torusforge/families/families.hpp"

namespace torusforge::pipeline {

/// Polynomials in x such as "x^4+x+1", "x^4 - 5x + 112/27", "3/2*x**2 - x",
/// or a JSON coefficient array in ascending degree ("[1, 1, 0, 0, 1]").
exactalg::RatPolynomial parse_polynomial(const std::string& text);

/// "l,p,b,c" for the given g.
families::AdmissibleQuadruple parse_quadruple(long g, const std::string& text);

}  // namespace torusforge::pipeline
