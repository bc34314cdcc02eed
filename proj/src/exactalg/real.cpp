#include "torusforge/exactalg/real.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "torusforge/error.hpp"

namespace torusforge::exactalg {

Real Real::from_hex(const std::string& text, mpfr_prec_t bits) {
  Real r(bits);
  if (mpfr_set_str(r.v_, text.c_str(), 0, MPFR_RNDN) != 0) {
    throw Error(ErrorKind::InvalidInput, "not a hex float: '" + text + "'");
  }
  return r;
}

double Real::log2_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  long exp = 0;
  double mant = mpfr_get_d_2exp(&exp, v_, MPFR_RNDN);
  return std::log2(std::fabs(mant)) + static_cast<double>(exp);
}

Integer Real::round_to_integer() const {
  Integer z;
  mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
  return z;
}

namespace {

std::string take(char* raw) {
  std::unique_ptr<char, decltype(&mpfr_free_str)> owned(raw, &mpfr_free_str);
  return std::string(owned.get());
}

}  // namespace

std::string Real::to_hex() const {
  char* raw = nullptr;
  if (mpfr_asprintf(&raw, "%Ra", v_) < 0) throw Error(ErrorKind::Internal, "mpfr_asprintf failed");
  return take(raw);
}

std::string Real::to_decimal(int digits) const {
  char* raw = nullptr;
  if (mpfr_asprintf(&raw, "%.*Rg", digits, v_) < 0) throw Error(ErrorKind::Internal, "mpfr_asprintf failed");
  return take(raw);
}

}  // namespace torusforge::exactalg
