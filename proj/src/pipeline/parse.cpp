#include "torusforge/pipeline/parse.hpp"

#include <cctype>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "torusforge/error.hpp"

namespace torusforge::pipeline {

using exactalg::RatPolynomial;

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) {
    for (char ch : text)
      if (!std::isspace(static_cast<unsigned char>(ch))) s_.push_back(ch);
  }

  RatPolynomial parse() {
    if (s_.empty()) fail("empty polynomial");
    std::map<unsigned long, Rational> terms;
    bool first = true;
    while (pos_ < s_.size()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        fail("expected + or -");
      }
      auto [coeff, degree] = term();
      terms[degree] += sign * coeff;
      first = false;
    }
    std::vector<Rational> v(terms.empty() ? 0 : terms.rbegin()->first + 1, Rational(0));
    for (auto& [d, c] : terms) {
      c.canonicalize();
      v[d] = c;
    }
    RatPolynomial f(std::move(v));
    if (f.is_zero()) fail("polynomial is zero");
    return f;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::InvalidInput, "cannot parse polynomial at offset " + std::to_string(pos_) + ": " + why);
  }

  Integer integer() {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected a number");
    return Integer(s_.substr(start, pos_ - start));
  }

  std::pair<Rational, unsigned long> term() {
    Rational coeff = 1;
    bool have_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      Integer num = integer();
      Integer den = 1;
      if (peek() == '/') {
        ++pos_;
        den = integer();
        if (den == 0) fail("zero denominator");
      }
      coeff = Rational(num, den);
      coeff.canonicalize();
      have_coeff = true;
      if (peek() == '*' && !(pos_ + 1 < s_.size() && s_[pos_ + 1] == '*')) ++pos_;
    }
    unsigned long degree = 0;
    if (peek() == 'x') {
      ++pos_;
      degree = 1;
      if (peek() == '^' || (peek() == '*' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '*')) {
        pos_ += peek() == '^' ? 1 : 2;
        Integer e = integer();
        if (e > 10000) fail("exponent too large");
        degree = e.get_ui();
      }
    } else if (!have_coeff) {
      fail("expected a coefficient or x");
    }
    return {coeff, degree};
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

RatPolynomial parse_polynomial(const std::string& text) {
  std::size_t first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && text[first] == '[') {
    try {
      nlohmann::json j = nlohmann::json::parse(text);
      std::vector<Rational> v;
      for (const auto& c : j) {
        Rational q = c.is_string() ? exactalg::parse_rational(c.get<std::string>()) : Rational(c.get<long>());
        v.push_back(q);
      }
      RatPolynomial f(std::move(v));
      if (f.is_zero()) throw Error(ErrorKind::InvalidInput, "polynomial is zero");
      return f;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::InvalidInput, std::string("bad coefficient array: ") + e.what());
    }
  }
  return Parser(text).parse();
}

families::AdmissibleQuadruple parse_quadruple(long g, const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.size() != 4) throw Error(ErrorKind::InvalidInput, "quadruple must be l,p,b,c");
  try {
    families::AdmissibleQuadruple q{g, std::stol(parts[0]), std::stol(parts[1]), exactalg::parse_integer(parts[2]),
                                    exactalg::parse_integer(parts[3])};
    return q;
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidInput, "quadruple entries must be integers");
  }
}

}  // namespace torusforge::pipeline
