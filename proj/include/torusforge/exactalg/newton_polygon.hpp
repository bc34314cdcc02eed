#pragma once

#include <nlohmann/json.hpp>

#include <vector>

#include "torusforge/exactalg/polynomial.hpp"

namespace torusforge::exactalg {

struct NewtonVertex {
  long abscissa;
  long ordinate;
  friend bool operator==(const NewtonVertex&, const NewtonVertex&) = default;
};

struct NewtonSegment {
  NewtonVertex from;
  NewtonVertex to;
  Rational slope;
  /// Lattice points strictly between the endpoints.
  long interior_lattice_points;
};

/// Lower convex hull of {(i, v_p(a_i)) : a_i != 0}.
class NewtonPolygon {
 public:
  NewtonPolygon(Integer prime, std::vector<NewtonVertex> vertices);

  const Integer& prime() const { return prime_; }
  const std::vector<NewtonVertex>& vertices() const { return vertices_; }
  std::vector<NewtonSegment> segments() const;

  /// Single segment spanning 0..deg whose only lattice points are its
  /// endpoints: the Eisenstein-Dumas irreducibility condition.
  bool eisenstein_dumas(long degree) const;

  nlohmann::json to_json() const;

 private:
  Integer prime_;
  std::vector<NewtonVertex> vertices_;
};

NewtonPolygon newton_polygon(const RatPolynomial& f, const Integer& prime);

}  // namespace torusforge::exactalg
