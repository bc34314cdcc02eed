#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "torusforge/exactalg/numbers.hpp"

namespace torusforge::exactalg {

bool is_prime(const Integer& n);
std::uint64_t next_prime(std::uint64_t n);
std::vector<std::uint64_t> primes_below(std::uint64_t bound);

/// Prime factorization by trial division, (prime, exponent) ascending.
std::vector<std::pair<std::uint64_t, unsigned>> factor(std::uint64_t n);
std::vector<std::uint64_t> distinct_prime_factors(const Integer& n);

std::uint64_t euler_phi(std::uint64_t n);

std::uint64_t powmod(std::uint64_t base, std::uint64_t exponent, std::uint64_t modulus);

/// True iff b has multiplicative order p-1 modulo the prime p.
bool primitive_root_check(const Integer& b, std::uint64_t p);

}  // namespace torusforge::exactalg
