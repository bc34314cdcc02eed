#include "torusforge/exactalg/hermite.hpp"

#include <utility>

#include "torusforge/error.hpp"

namespace torusforge::exactalg {

namespace {

void subtract_multiple(IntVector& target, const Integer& x, const IntVector& source) {
  for (std::size_t i = 0; i < target.size(); ++i) mpz_submul(target[i].get_mpz_t(), x.get_mpz_t(), source[i].get_mpz_t());
}

}  // namespace

std::vector<IntVector> hermite_normal_form(std::vector<IntVector> rows) {
  if (rows.empty()) return rows;
  const std::size_t cols = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols) throw Error(ErrorKind::InvalidInput, "rows of unequal length");
  std::size_t pivot_row = 0;
  std::vector<std::size_t> pivot_cols;
  for (std::size_t c = 0; c < cols && pivot_row < rows.size(); ++c) {
    while (true) {
      // Move the smallest nonzero entry of the column into the pivot row.
      std::size_t best = rows.size();
      for (std::size_t i = pivot_row; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        if (best == rows.size() || abs(rows[i][c]) < abs(rows[best][c])) best = i;
      }
      if (best == rows.size()) break;
      std::swap(rows[pivot_row], rows[best]);
      bool clear = true;
      for (std::size_t i = pivot_row + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[pivot_row][c].get_mpz_t());
        subtract_multiple(rows[i], q, rows[pivot_row]);
        if (rows[i][c] != 0) clear = false;
      }
      if (clear) break;
    }
    if (rows[pivot_row][c] == 0) continue;
    if (rows[pivot_row][c] < 0)
      for (auto& x : rows[pivot_row]) x = -x;
    for (std::size_t i = 0; i < pivot_row; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[pivot_row][c].get_mpz_t());
      if (q != 0) subtract_multiple(rows[i], q, rows[pivot_row]);
    }
    ++pivot_row;
  }
  rows.resize(pivot_row);
  return rows;
}

bool lattice_contains(const std::vector<IntVector>& hnf, IntVector v) {
  std::size_t c = 0;
  for (const auto& row : hnf) {
    if (row.size() != v.size()) throw Error(ErrorKind::InvalidInput, "dimension mismatch in lattice membership");
    std::size_t pivot = 0;
    while (pivot < row.size() && row[pivot] == 0) ++pivot;
    for (; c < pivot; ++c)
      if (v[c] != 0) return false;
    if (v[pivot] % row[pivot] != 0) return false;
    Integer q = v[pivot] / row[pivot];
    subtract_multiple(v, q, row);
    c = pivot + 1;
  }
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

bool lattice_contains(const std::vector<IntVector>& outer_hnf, const std::vector<IntVector>& inner) {
  for (const auto& v : inner)
    if (!lattice_contains(outer_hnf, v)) return false;
  return true;
}

nlohmann::json to_json(const std::vector<IntVector>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : rows) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& x : v) row.push_back(x.get_str());
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace torusforge::exactalg
