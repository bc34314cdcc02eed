#include "torusforge/exactalg/number_theory.hpp"

#include "torusforge/error.hpp"

namespace torusforge::exactalg {

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

std::uint64_t next_prime(std::uint64_t n) {
  std::uint64_t c = n + 1;
  while (!is_prime(Integer(static_cast<unsigned long>(c)))) ++c;
  return c;
}

std::vector<std::uint64_t> primes_below(std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  if (bound <= 2) return out;
  std::vector<bool> composite(bound, false);
  for (std::uint64_t i = 2; i < bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j < bound; j += i) composite[j] = true;
  }
  return out;
}

std::vector<std::pair<std::uint64_t, unsigned>> factor(std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidInput, "factor(0)");
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e > 0) out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<std::uint64_t> distinct_prime_factors(const Integer& n) {
  Integer m = abs(n);
  if (m == 0) throw Error(ErrorKind::InvalidInput, "prime factors of 0");
  if (!m.fits_ulong_p()) throw Error(ErrorKind::Unsupported, "trial division limited to 64-bit integers");
  std::vector<std::uint64_t> out;
  for (const auto& [p, e] : factor(m.get_ui())) out.push_back(p);
  return out;
}

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t phi = n;
  for (const auto& [p, e] : factor(n)) phi = phi / p * (p - 1);
  return phi;
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exponent, std::uint64_t modulus) {
  unsigned __int128 result = 1 % modulus;
  unsigned __int128 b = base % modulus;
  while (exponent > 0) {
    if (exponent & 1) result = result * b % modulus;
    b = b * b % modulus;
    exponent >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

bool primitive_root_check(const Integer& b, std::uint64_t p) {
  if (!is_prime(Integer(static_cast<unsigned long>(p)))) {
    throw Error(ErrorKind::InvalidInput, std::to_string(p) + " is not prime");
  }
  Integer r = b % Integer(static_cast<unsigned long>(p));
  if (r < 0) r += static_cast<unsigned long>(p);
  if (r == 0) throw Error(ErrorKind::InvalidInput, "p divides b in primitive_root_check");
  const std::uint64_t residue = r.get_ui();
  if (p == 2) return true;
  for (const auto& [q, e] : factor(p - 1)) {
    if (powmod(residue, (p - 1) / q, p) == 1) return false;
  }
  return true;
}

}  // namespace torusforge::exactalg
