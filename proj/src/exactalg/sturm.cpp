#include "torusforge/exactalg/sturm.hpp"

#include <algorithm>
#include <functional>

namespace torusforge::exactalg {

namespace {

int sign_at(const IntPolynomial& p, const ExtendedRational& x) {
  switch (x.kind) {
    case ExtendedRational::Kind::PosInf: return sgn(p.leading());
    case ExtendedRational::Kind::NegInf: return (p.degree() % 2 == 0) ? sgn(p.leading()) : -sgn(p.leading());
    case ExtendedRational::Kind::Finite: break;
  }
  return sgn(p.evaluate(x.value));
}

bool less(const ExtendedRational& a, const ExtendedRational& b) {
  using K = ExtendedRational::Kind;
  if (a.kind == K::PosInf || b.kind == K::NegInf) return false;
  if (a.kind == K::NegInf || b.kind == K::PosInf) return true;
  return a.value < b.value;
}

std::vector<Integer> positive_divisors(Integer n) {
  n = abs(n);
  std::vector<Integer> small;
  std::vector<Integer> large;
  for (Integer d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

}  // namespace

SturmChain::SturmChain(const RatPolynomial& f) {
  if (f.is_zero()) throw Error(ErrorKind::InvalidInput, "Sturm chain of the zero polynomial");
  chain_.push_back(primitive_part(f));
  if (f.degree() == 0) return;
  chain_.push_back(primitive_part(chain_.front().derivative()));
  while (true) {
    const auto& a = chain_[chain_.size() - 2];
    const auto& b = chain_.back();
    if (b.degree() == 0) break;
    IntPolynomial r = signed_pseudo_remainder(a, b);
    if (r.is_zero()) break;
    // primitive_part forces a positive leading coefficient, so restore the sign of -r.
    IntPolynomial next = primitive_part(r);
    if (sgn(r.leading()) > 0) next = Integer(-1) * next;
    chain_.push_back(std::move(next));
  }
}

std::vector<int> SturmChain::signs_at(const ExtendedRational& x) const {
  std::vector<int> s;
  s.reserve(chain_.size());
  for (const auto& p : chain_) s.push_back(sign_at(p, x));
  return s;
}

int SturmChain::sign_variations(const ExtendedRational& x) const {
  int variations = 0;
  int last = 0;
  for (int s : signs_at(x)) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++variations;
    last = s;
  }
  return variations;
}

long SturmChain::count(const ExtendedRational& lo, const ExtendedRational& hi) const {
  if (!less(lo, hi)) throw Error(ErrorKind::InvalidInput, "Sturm interval requires lo < hi");
  for (const auto* end : {&lo, &hi}) {
    if (end->kind == ExtendedRational::Kind::Finite && chain_.front().evaluate(end->value) == 0) {
      throw Error(ErrorKind::EndpointRoot, "endpoint " + to_decimal(end->value) + " is a root");
    }
  }
  return sign_variations(lo) - sign_variations(hi);
}

long sturm_count(const RatPolynomial& f, const ExtendedRational& lo, const ExtendedRational& hi) {
  return SturmChain(f).count(lo, hi);
}

long sturm_count(const RatPolynomial& f) {
  return sturm_count(f, ExtendedRational::neg_inf(), ExtendedRational::pos_inf());
}

Rational cauchy_bound(const RatPolynomial& f) {
  if (f.is_zero()) throw Error(ErrorKind::InvalidInput, "root bound of the zero polynomial");
  Rational m = 0;
  for (long i = 0; i < f.degree(); ++i) {
    Rational r = abs(f[static_cast<std::size_t>(i)] / f.leading());
    if (r > m) m = r;
  }
  return m + 1;
}

std::vector<std::pair<Rational, Rational>> isolate_real_roots(const RatPolynomial& f, const Rational& max_width) {
  SturmChain chain(f);
  const IntPolynomial& p = chain.members().front();
  std::vector<std::pair<Rational, Rational>> out;
  if (p.degree() <= 0) return out;
  Rational bound = cauchy_bound(f) + 1;
  std::function<void(const Rational&, const Rational&, long)> split = [&](const Rational& a, const Rational& b, long n) {
    if (n == 0) return;
    if (n == 1 && b - a <= max_width) {
      out.emplace_back(a, b);
      return;
    }
    // Split at the midpoint, nudged off any exact root.
    Rational width = b - a;
    Rational mid = a + width / 2;
    for (int k = 3; p.evaluate(mid) == 0; k += 2) mid = a + width / 2 + width / (Rational(k) * 4);
    long left = chain.count(ExtendedRational::finite(a), ExtendedRational::finite(mid));
    split(a, mid, left);
    split(mid, b, n - left);
  };
  Rational lo = -bound;
  Rational hi = bound;
  split(lo, hi, chain.count(ExtendedRational::finite(lo), ExtendedRational::finite(hi)));
  return out;
}

std::vector<Rational> rational_roots(const RatPolynomial& f) {
  if (f.is_zero()) throw Error(ErrorKind::InvalidInput, "rational roots of the zero polynomial");
  if (f.degree() == 0) return {};
  IntPolynomial p = primitive_part(f);
  const Integer lead = p.leading();
  Rational width = make_rational(Integer(1), Integer(2) * lead * lead);
  std::vector<Rational> roots;
  const auto denominators = positive_divisors(lead);
  for (const auto& [a, b] : isolate_real_roots(f, width)) {
    Rational mid = (a + b) / 2;
    for (const auto& q : denominators) {
      Rational scaled = mid * q;
      Integer num;
      mpz_fdiv_q(num.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
      for (Integer cand = num - 1; cand <= num + 1; ++cand) {
        Rational r = make_rational(cand, q);
        if (r > a && r < b && p.evaluate(r) == 0 && std::find(roots.begin(), roots.end(), r) == roots.end()) {
          roots.push_back(r);
        }
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

nlohmann::json sturm_summary(const RatPolynomial& f) {
  SturmChain chain(f);
  auto lo = ExtendedRational::neg_inf();
  auto hi = ExtendedRational::pos_inf();
  nlohmann::json j;
  j["chain_length"] = chain.members().size();
  j["signs_neg_inf"] = chain.signs_at(lo);
  j["signs_pos_inf"] = chain.signs_at(hi);
  j["variations_neg_inf"] = chain.sign_variations(lo);
  j["variations_pos_inf"] = chain.sign_variations(hi);
  j["real_roots"] = chain.count(lo, hi);
  return j;
}

}  // namespace torusforge::exactalg
