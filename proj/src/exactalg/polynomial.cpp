#include "torusforge/exactalg/polynomial.hpp"

#include <sstream>

#include "torusforge/canonical.hpp"

namespace torusforge::exactalg {

RatPolynomial to_rational(const IntPolynomial& f) {
  std::vector<Rational> c;
  c.reserve(f.coefficients().size());
  for (const auto& a : f.coefficients()) c.emplace_back(a);
  return RatPolynomial(std::move(c));
}

std::pair<Rational, IntPolynomial> content_and_primitive(const RatPolynomial& f) {
  if (f.is_zero()) return {Rational(0), IntPolynomial()};
  Integer den_lcm = 1;
  for (const auto& a : f.coefficients()) {
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), a.get_den_mpz_t());
  }
  std::vector<Integer> scaled;
  scaled.reserve(f.coefficients().size());
  Integer num_gcd = 0;
  for (const auto& a : f.coefficients()) {
    Integer v = a.get_num() * (den_lcm / a.get_den());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), v.get_mpz_t());
    scaled.push_back(std::move(v));
  }
  if (scaled.back() < 0) num_gcd = -num_gcd;
  for (auto& v : scaled) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), num_gcd.get_mpz_t());
  return {make_rational(num_gcd, den_lcm), IntPolynomial(std::move(scaled))};
}

IntPolynomial primitive_part(const RatPolynomial& f) { return content_and_primitive(f).second; }
IntPolynomial primitive_part(const IntPolynomial& f) { return primitive_part(to_rational(f)); }

std::pair<RatPolynomial, RatPolynomial> divmod(const RatPolynomial& a, const RatPolynomial& b) {
  if (b.is_zero()) throw Error(ErrorKind::InvalidInput, "polynomial division by zero");
  std::vector<Rational> rem = a.coefficients();
  const long db = b.degree();
  if (a.degree() < db) return {RatPolynomial(), a};
  std::vector<Rational> quo(static_cast<std::size_t>(a.degree() - db + 1), Rational(0));
  const Rational& lb = b.leading();
  for (long k = a.degree() - db; k >= 0; --k) {
    Rational q = rem[static_cast<std::size_t>(k + db)] / lb;
    quo[static_cast<std::size_t>(k)] = q;
    if (q == 0) continue;
    for (long j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k + j)] -= q * b[static_cast<std::size_t>(j)];
  }
  rem.resize(static_cast<std::size_t>(db));
  return {RatPolynomial(std::move(quo)), RatPolynomial(std::move(rem))};
}

RatPolynomial operator%(const RatPolynomial& a, const RatPolynomial& b) { return divmod(a, b).second; }

IntPolynomial signed_pseudo_remainder(const IntPolynomial& a, const IntPolynomial& b) {
  if (b.is_zero()) throw Error(ErrorKind::InvalidInput, "pseudo-division by zero");
  std::vector<Integer> rem = a.coefficients();
  const long db = b.degree();
  if (a.degree() < db) return a;
  const Integer lb = abs(b.leading());
  const int lb_sign = sgn(b.leading());
  for (long k = a.degree() - db; k >= 0; --k) {
    // rem <- |lb| * rem - sign(lb) * rem[top] * x^k * b keeps the multiplier positive.
    Integer top = rem[static_cast<std::size_t>(k + db)];
    for (auto& c : rem) c *= lb;
    for (long j = 0; j <= db; ++j) {
      rem[static_cast<std::size_t>(k + j)] -= lb_sign * top * b[static_cast<std::size_t>(j)];
    }
  }
  rem.resize(static_cast<std::size_t>(db));
  return IntPolynomial(std::move(rem));
}

RatPolynomial monic(const RatPolynomial& f) {
  if (f.is_zero()) return f;
  return Rational(1 / f.leading()) * f;
}

RatPolynomial gcd(const RatPolynomial& a, const RatPolynomial& b) {
  RatPolynomial x = a;
  RatPolynomial y = b;
  while (!y.is_zero()) {
    RatPolynomial r = to_rational(primitive_part(x % y));
    x = std::move(y);
    y = std::move(r);
  }
  return monic(x);
}

bool is_squarefree(const RatPolynomial& f) {
  if (f.is_zero()) return false;
  return gcd(f, f.derivative()).degree() == 0;
}

namespace {

template <typename C>
std::string render(const std::vector<C>& coeffs, const std::string& var) {
  if (coeffs.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    const C& c = coeffs[k];
    if (c == 0) continue;
    C mag = abs(c);
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    const bool unit = (mag == 1);
    if (k == 0 || !unit) out << mag.get_str();
    if (k > 0 && !unit) out << "*";
    if (k >= 1) out << var;
    if (k >= 2) out << "^" << k;
  }
  return out.str();
}

}  // namespace

std::string to_string(const RatPolynomial& f, const std::string& var) { return render(f.coefficients(), var); }
std::string to_string(const IntPolynomial& f, const std::string& var) { return render(f.coefficients(), var); }

nlohmann::json to_json(const RatPolynomial& f) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : f.coefficients()) arr.push_back(to_decimal(c));
  return arr;
}

RatPolynomial rat_polynomial_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidInput, "polynomial must be a JSON array");
  std::vector<Rational> c;
  for (const auto& e : j) {
    if (e.is_string()) {
      c.push_back(parse_rational(e.get<std::string>()));
    } else if (e.is_number_integer()) {
      c.emplace_back(Integer(std::to_string(e.get<long long>())));
    } else {
      throw Error(ErrorKind::InvalidInput, "polynomial coefficients must be decimal strings");
    }
  }
  RatPolynomial f(std::move(c));
  if (!j.empty() && f.degree() + 1 != static_cast<long>(j.size())) {
    throw Error(ErrorKind::InvalidInput, "polynomial has trailing zero coefficients");
  }
  return f;
}

std::string polynomial_hash(const RatPolynomial& f) {
  return sha256_hex(canonical_dump(to_json(monic(f))));
}

}  // namespace torusforge::exactalg
