#pragma once

// Test-only reference implementations. Slow and obvious on purpose; nothing
// here calls into the library.

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

inline std::vector<std::pair<std::uint64_t, std::uint32_t>> trial_factor(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> lo, hi;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    lo.push_back(d);
    if (d != n / d) hi.push_back(n / d);
  }
  lo.insert(lo.end(), hi.rbegin(), hi.rend());
  return lo;
}

// Largest common unitary divisor.
inline std::uint64_t unitary_gcd(std::uint64_t a, std::uint64_t b) {
  std::uint64_t best = 1;
  for (std::uint64_t d : divisors(a)) {
    if (std::gcd(d, a / d) != 1 || b % d != 0 || std::gcd(d, b / d) != 1) continue;
    best = std::max(best, d);
  }
  return best;
}

// d | n is biunitary when the largest common unitary divisor of d and n/d is 1.
inline std::uint64_t sigma_bu(std::uint64_t n) {
  std::uint64_t s = 0;
  for (std::uint64_t d : divisors(n)) {
    if (unitary_gcd(d, n / d) == 1) s += d;
  }
  return s;
}

// Multiplicative version of the same definition, for larger n.
inline std::uint64_t sigma_bu_mult(std::uint64_t n) {
  std::uint64_t s = 1;
  for (auto [p, e] : trial_factor(n)) {
    std::uint64_t pe = 1;
    for (std::uint32_t i = 0; i < e; ++i) pe *= p;
    s *= sigma_bu(pe);
  }
  return s;
}

inline std::uint64_t sigma_unitary(std::uint64_t n) {
  std::uint64_t s = 0;
  for (std::uint64_t d : divisors(n)) {
    if (std::gcd(d, n / d) == 1) s += d;
  }
  return s;
}

}  // namespace oracle
