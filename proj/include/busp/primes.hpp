#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace busp {

struct PrimePower {
  std::uint64_t prime = 0;
  std::uint32_t exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Fixed-capacity scratch list of prime powers used on hot paths where a heap
// allocation per integer would dominate. A prime may appear more than once
// until canonicalize() runs.
class FactorBuffer {
 public:
  static constexpr std::size_t kCapacity = 192;

  void clear() noexcept { size_ = 0; }
  void push(std::uint64_t prime, std::uint32_t exponent);
  void append(std::span<const PrimePower> powers, std::uint32_t multiplicity = 1);

  // Sorts by prime and merges repeated primes.
  void canonicalize() noexcept;

  std::span<const PrimePower> view() const noexcept { return {items_.data(), size_}; }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

 private:
  std::array<PrimePower, kCapacity> items_{};
  std::size_t size_ = 0;
};

// Smallest-prime-factor table for [0, kLimit), built once on first use and
// immutable afterwards.
class SmallSieve {
 public:
  static constexpr std::uint32_t kLimit = 1u << 24;

  static const SmallSieve& instance();

  // n must be in [2, kLimit).
  std::uint32_t smallest_factor(std::uint32_t n) const noexcept {
    const std::uint16_t f = spf_[n];
    return f == 0 ? n : f;
  }
  bool is_prime(std::uint32_t n) const noexcept { return n >= 2 && spf_[n] == 0; }

  // All primes p < kLimit in increasing order.
  std::span<const std::uint32_t> primes() const noexcept { return primes_; }
  // Primes p <= bound (bound may exceed kLimit; the result is then truncated).
  std::span<const std::uint32_t> primes_up_to(std::uint64_t bound) const noexcept;

 private:
  SmallSieve();

  std::vector<std::uint16_t> spf_;  // 0 marks a prime (or 0/1)
  std::vector<std::uint32_t> primes_;
};

// Deterministic over the whole 64-bit range (Miller-Rabin with fixed bases).
bool is_prime(std::uint64_t n);

// Trial division ceiling used before switching to primality test + rho.
inline constexpr std::uint32_t kTrialDivisionBound = 1u << 10;

// Appends the prime factorisation of n (n >= 1) to out, each exponent scaled
// by multiplicity. The buffer is left uncanonicalised.
void factor_into(std::uint64_t n, FactorBuffer& out, std::uint32_t multiplicity = 1);

// Returns a nontrivial factor of an odd composite n using Brent's variant of
// Pollard rho. Throws FactorizationError when the iteration cap is exhausted.
std::uint64_t rho_split(std::uint64_t n);

std::uint64_t isqrt(std::uint64_t n) noexcept;

}  // namespace busp
