#pragma once

#include <nlohmann/json.hpp>

#include <vector>

#include "torusforge/exactalg/lll.hpp"

namespace torusforge::exactalg {

/// Row-style Hermite normal form of the lattice spanned by the rows: echelon
/// shape, positive pivots, entries above each pivot reduced into [0, pivot).
/// Zero rows are dropped, so the result is a basis.
std::vector<IntVector> hermite_normal_form(std::vector<IntVector> rows);

/// Membership test against a basis in Hermite normal form.
bool lattice_contains(const std::vector<IntVector>& hnf, IntVector v);
/// True iff every row of inner lies in the lattice of the HNF basis outer.
bool lattice_contains(const std::vector<IntVector>& outer_hnf, const std::vector<IntVector>& inner);

nlohmann::json to_json(const std::vector<IntVector>& rows);

}  // namespace torusforge::exactalg
