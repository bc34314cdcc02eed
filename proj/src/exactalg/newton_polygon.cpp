#include "torusforge/exactalg/newton_polygon.hpp"

#include <numeric>

#include "torusforge/exactalg/number_theory.hpp"

namespace torusforge::exactalg {

NewtonPolygon::NewtonPolygon(Integer prime, std::vector<NewtonVertex> vertices)
    : prime_(std::move(prime)), vertices_(std::move(vertices)) {}

std::vector<NewtonSegment> NewtonPolygon::segments() const {
  std::vector<NewtonSegment> out;
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    const auto& a = vertices_[i - 1];
    const auto& b = vertices_[i];
    long dx = b.abscissa - a.abscissa;
    long dy = b.ordinate - a.ordinate;
    out.push_back({a, b, make_rational(Integer(dy), Integer(dx)), std::gcd(dx, std::labs(dy)) - 1});
  }
  return out;
}

bool NewtonPolygon::eisenstein_dumas(long degree) const {
  auto segs = segments();
  return segs.size() == 1 && segs[0].from.abscissa == 0 && segs[0].to.abscissa == degree &&
         segs[0].interior_lattice_points == 0;
}

nlohmann::json NewtonPolygon::to_json() const {
  nlohmann::json j;
  j["prime"] = prime_.get_str();
  j["vertices"] = nlohmann::json::array();
  for (const auto& v : vertices_) j["vertices"].push_back({v.abscissa, v.ordinate});
  j["segments"] = nlohmann::json::array();
  for (const auto& s : segments()) {
    j["segments"].push_back({{"slope", to_decimal(s.slope)}, {"interior_lattice_points", s.interior_lattice_points}});
  }
  return j;
}

NewtonPolygon newton_polygon(const RatPolynomial& f, const Integer& prime) {
  if (f.is_zero()) throw Error(ErrorKind::InvalidInput, "Newton polygon of the zero polynomial");
  if (!is_prime(prime)) throw Error(ErrorKind::InvalidInput, prime.get_str() + " is not prime");
  std::vector<NewtonVertex> points;
  for (long i = 0; i <= f.degree(); ++i) {
    const Rational& a = f.coefficients()[static_cast<std::size_t>(i)];
    if (a != 0) points.push_back({i, valuation(a, prime)});
  }
  // Monotone chain lower hull; points are already sorted by abscissa.
  std::vector<NewtonVertex> hull;
  for (const auto& pt : points) {
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2];
      const auto& a = hull.back();
      long cross = (a.abscissa - o.abscissa) * (pt.ordinate - o.ordinate) -
                   (a.ordinate - o.ordinate) * (pt.abscissa - o.abscissa);
      if (cross <= 0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(pt);
  }
  return NewtonPolygon(prime, std::move(hull));
}

}  // namespace torusforge::exactalg
