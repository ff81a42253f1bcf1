#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "busp/errors.hpp"
#include "busp/primes.hpp"

namespace busp {

// Canonical factorisation of a positive integer: primes strictly
// increasing, exponents >= 1, and the product of the pairs equal to value().
// The empty factorisation represents 1.
class Factorization {
 public:
  Factorization() = default;

  // Validates the invariants (sorted distinct primes, each prime passing
  // is_prime, positive exponents, product fits 64 bits).
  // Throws std::invalid_argument or OverflowError.
  static Factorization from_pairs(std::vector<PrimePower> pairs);

  std::span<const PrimePower> pairs() const noexcept { return pairs_; }
  std::uint64_t value() const noexcept { return value_; }
  bool is_one() const noexcept { return pairs_.empty(); }

  auto begin() const noexcept { return pairs_.begin(); }
  auto end() const noexcept { return pairs_.end(); }

  friend bool operator==(const Factorization&, const Factorization&) = default;

 private:
  Factorization(std::vector<PrimePower> pairs, std::uint64_t value)
      : pairs_(std::move(pairs)), value_(value) {}

  friend Factorization factorize(std::uint64_t n);

  std::vector<PrimePower> pairs_;
  std::uint64_t value_ = 1;
};

// p^count || n
struct Valuation {
  std::uint64_t base = 0;
  std::uint32_t count = 0;

  friend bool operator==(const Valuation&, const Valuation&) = default;
};

namespace checked {

std::uint64_t add(std::uint64_t a, std::uint64_t b);
std::uint64_t mul(std::uint64_t a, std::uint64_t b);
std::uint64_t pow(std::uint64_t base, std::uint32_t exp);

}  // namespace checked

// Throws std::invalid_argument for n == 0. Small n use the shared
// smallest-prime-factor table; larger n fall back to trial division,
// Miller-Rabin and Pollard rho (FactorizationError if rho gives up).
Factorization factorize(std::uint64_t n);

// Sum of the biunitary divisors of p^e, e >= 1. Odd e gives the full
// geometric sum (p^(e+1)-1)/(p-1); even e drops the middle term p^(e/2).
// Evaluated without division so any result that fits 64 bits is reachable.
// p is assumed prime (not checked); p < 2 or e == 0 throw
// std::invalid_argument and a result beyond 64 bits throws OverflowError.
std::uint64_t sigma_bu_prime_power(std::uint64_t p, std::uint32_t e);

// The two-case closed form evaluated with 128-bit intermediates:
// (p^(e+1)-1)/(p-1) for odd e, (p^(e/2)-1)(p^(e/2+1)+1)/(p-1) for even e.
std::uint64_t sigma_bu_prime_power_two_case(std::uint64_t p, std::uint32_t e);

// The single-expression form
// (p^floor((e+2)/2) + 1)(p^floor((e+1)/2) - 1)/(p - 1).
std::uint64_t sigma_bu_prime_power_floor_form(std::uint64_t p, std::uint32_t e);

// Multiplicative assembly; sigma_bu of the empty factorisation is 1.
std::uint64_t sigma_bu(const Factorization& f);
std::uint64_t sigma_bu(std::span<const PrimePower> pairs);
std::uint64_t sigma_bu(std::uint64_t n);

inline constexpr std::uint64_t kOracleBound = 1'000'000;

// Definition-level evaluation: enumerate every divisor d of n and keep the
// ones for which no prime p has v_p(d) >= 1 and 2 v_p(d) = v_p(n).
// Shares no code with the formula path. Throws std::invalid_argument for
// n == 0 or n > bound.
std::uint64_t sigma_bu_oracle(std::uint64_t n, std::uint64_t bound = kOracleBound);

// Sum of unitary divisors, product of (p^e + 1).
std::uint64_t sigma_unitary(const Factorization& f);
std::uint64_t sigma_unitary(std::uint64_t n);

// Ordinary divisor sum.
std::uint64_t sigma_classic(const Factorization& f);
std::uint64_t sigma_classic(std::uint64_t n);

std::uint32_t omega(const Factorization& f) noexcept;

// Exact p-adic valuation. n == 0 or non-prime p throw std::invalid_argument.
Valuation valuation(std::uint64_t n, std::uint64_t p);

}  // namespace busp
