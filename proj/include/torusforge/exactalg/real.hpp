#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "torusforge/exactalg/numbers.hpp"

namespace torusforge::exactalg {

/// Owning MPFR value with an explicit precision in bits. Binary operations
/// produce a result at the larger operand precision, rounded to nearest.
class Real {
 public:
  explicit Real(mpfr_prec_t bits = 64) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
  Real(long value, mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_si(v_, value, MPFR_RNDN); }
  Real(const Integer& value, mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN); }
  Real(const Rational& value, mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN); }
  Real(const Real& other) { mpfr_init2(v_, mpfr_get_prec(other.v_)); mpfr_set(v_, other.v_, MPFR_RNDN); }
  Real(const Real& other, mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set(v_, other.v_, MPFR_RNDN); }
  Real(Real&& other) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
  }
  Real& operator=(const Real& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  static Real pow2(long exponent, mpfr_prec_t bits) {
    Real r(1L, bits);
    mpfr_mul_2si(r.v_, r.v_, exponent, MPFR_RNDN);
    return r;
  }
  /// Parses MPFR's hex-float output ("%Ra").
  static Real from_hex(const std::string& text, mpfr_prec_t bits);

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// log2|x|; -infinity for zero.
  double log2_abs() const;
  Integer round_to_integer() const;
  std::string to_hex() const;
  std::string to_decimal(int digits = 20) const;

  Real abs() const { Real r(precision()); mpfr_abs(r.v_, v_, MPFR_RNDN); return r; }
  Real sqrt() const { Real r(precision()); mpfr_sqrt(r.v_, v_, MPFR_RNDN); return r; }
  Real root(unsigned long k) const { Real r(precision()); mpfr_rootn_ui(r.v_, v_, k, MPFR_RNDN); return r; }
  Real scaled_by_pow2(long e) const { Real r(precision()); mpfr_mul_2si(r.v_, v_, e, MPFR_RNDN); return r; }

  friend Real operator-(const Real& a) { Real r(a.precision()); mpfr_neg(r.v_, a.v_, MPFR_RNDN); return r; }
  friend Real operator+(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator*(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator/(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  Real& operator+=(const Real& b) { mpfr_add(v_, v_, b.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& b) { mpfr_sub(v_, v_, b.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& b) { mpfr_mul(v_, v_, b.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& b) { mpfr_div(v_, v_, b.v_, MPFR_RNDN); return *this; }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

 private:
  static mpfr_prec_t wider(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }
  mpfr_t v_;
};

inline Real max(const Real& a, const Real& b) { return a < b ? b : a; }

struct Complex {
  Real re;
  Real im;

  explicit Complex(mpfr_prec_t bits = 64) : re(bits), im(bits) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  mpfr_prec_t precision() const { return std::max(re.precision(), im.precision()); }
  Complex conj() const { return {re, -im}; }
  Real norm2() const { return re * re + im * im; }
  Real abs() const { return norm2().sqrt(); }
  Complex with_precision(mpfr_prec_t bits) const { return {Real(re, bits), Real(im, bits)}; }

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator*(const Real& s, const Complex& a) { return {s * a.re, s * a.im}; }
  friend Complex operator/(const Complex& a, const Complex& b) {
    Real d = b.norm2();
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
};

}  // namespace torusforge::exactalg
