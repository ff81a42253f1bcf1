#include "busp/primes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "busp/errors.hpp"

namespace busp {
namespace {

using u128 = unsigned __int128;

struct MulMod64 {
  std::uint64_t m;
  std::uint64_t operator()(std::uint64_t a, std::uint64_t b) const noexcept {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
  }
};

// Only valid while m < 2^32, so the product fits a machine word.
struct MulMod32 {
  std::uint64_t m;
  std::uint64_t operator()(std::uint64_t a, std::uint64_t b) const noexcept { return a * b % m; }
};

template <class Mul>
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, const Mul& mul) {
  std::uint64_t result = 1 % mul.m;
  base %= mul.m;
  while (exp != 0) {
    if (exp & 1) result = mul(result, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return result;
}

template <class Mul>
bool strong_probable_prime(std::uint64_t n, std::uint64_t a, const Mul& mul) {
  a %= n;
  if (a == 0) return true;
  std::uint64_t d = n - 1;
  const int s = std::countr_zero(d);
  d >>= s;
  std::uint64_t x = pow_mod(a, d, mul);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mul(x, x);
    if (x == n - 1) return true;
  }
  return false;
}

bool miller_rabin(std::uint64_t n) {
  if (n < (1ull << 32)) {
    const MulMod32 mul{n};
    for (std::uint64_t a : {2ull, 7ull, 61ull}) {
      if (!strong_probable_prime(n, a, mul)) return false;
    }
    return true;
  }
  const MulMod64 mul{n};
  for (std::uint64_t a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
    if (!strong_probable_prime(n, a, mul)) return false;
  }
  return true;
}

void factor_table(std::uint32_t n, FactorBuffer& out, std::uint32_t multiplicity) {
  const SmallSieve& sieve = SmallSieve::instance();
  while (n > 1) {
    const std::uint32_t p = sieve.smallest_factor(n);
    std::uint32_t e = 0;
    do {
      n /= p;
      ++e;
    } while (n % p == 0);
    out.push(p, e * multiplicity);
  }
}

// n is odd, and when n >= SmallSieve::kLimit it has no prime factor
// <= kTrialDivisionBound.
void factor_rough(std::uint64_t n, FactorBuffer& out, std::uint32_t multiplicity) {
  if (n == 1) return;
  if (n < SmallSieve::kLimit) {
    factor_table(static_cast<std::uint32_t>(n), out, multiplicity);
    return;
  }
  if (miller_rabin(n)) {
    out.push(n, multiplicity);
    return;
  }
  const std::uint64_t d = rho_split(n);
  factor_rough(d, out, multiplicity);
  factor_rough(n / d, out, multiplicity);
}

}  // namespace

void FactorBuffer::push(std::uint64_t prime, std::uint32_t exponent) {
  if (size_ == kCapacity) throw std::length_error("FactorBuffer capacity exceeded");
  items_[size_++] = PrimePower{prime, exponent};
}

void FactorBuffer::append(std::span<const PrimePower> powers, std::uint32_t multiplicity) {
  if (size_ + powers.size() > kCapacity) throw std::length_error("FactorBuffer capacity exceeded");
  for (const PrimePower& pp : powers) items_[size_++] = PrimePower{pp.prime, pp.exponent * multiplicity};
}

void FactorBuffer::canonicalize() noexcept {
  // Insertion sort: the lists are short and often nearly sorted.
  for (std::size_t i = 1; i < size_; ++i) {
    const PrimePower key = items_[i];
    std::size_t j = i;
    while (j > 0 && items_[j - 1].prime > key.prime) {
      items_[j] = items_[j - 1];
      --j;
    }
    items_[j] = key;
  }
  std::size_t w = 0;
  for (std::size_t i = 0; i < size_; ++i) {
    if (w > 0 && items_[w - 1].prime == items_[i].prime) {
      items_[w - 1].exponent += items_[i].exponent;
    } else {
      items_[w++] = items_[i];
    }
  }
  size_ = w;
}

SmallSieve::SmallSieve() : spf_(kLimit, 0) {
  for (std::uint32_t i = 2; static_cast<std::uint64_t>(i) * i < kLimit; ++i) {
    if (spf_[i] != 0) continue;
    for (std::uint32_t j = i * i; j < kLimit; j += i) {
      if (spf_[j] == 0) spf_[j] = static_cast<std::uint16_t>(i);
    }
  }
  primes_.reserve(1'100'000);
  for (std::uint32_t i = 2; i < kLimit; ++i) {
    if (spf_[i] == 0) primes_.push_back(i);
  }
}

const SmallSieve& SmallSieve::instance() {
  static const SmallSieve sieve;
  return sieve;
}

std::span<const std::uint32_t> SmallSieve::primes_up_to(std::uint64_t bound) const noexcept {
  const auto end = std::upper_bound(primes_.begin(), primes_.end(), bound,
                                    [](std::uint64_t b, std::uint32_t p) { return b < p; });
  return {primes_.data(), static_cast<std::size_t>(end - primes_.begin())};
}

bool is_prime(std::uint64_t n) {
  if (n < SmallSieve::kLimit) return SmallSieve::instance().is_prime(static_cast<std::uint32_t>(n));
  if (n % 2 == 0) return false;
  for (std::uint64_t p : {3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return false;
  }
  return miller_rabin(n);
}

std::uint64_t rho_split(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  constexpr std::uint64_t kMaxIterations = 1ull << 24;
  constexpr std::uint64_t kBatch = 128;
  const MulMod64 mul{n};
  auto diff = [](std::uint64_t a, std::uint64_t b) { return a > b ? a - b : b - a; };

  for (std::uint64_t c = 1; c < 32; ++c) {
    auto step = [&](std::uint64_t x) {
      const std::uint64_t sq = mul(x, x);
      return sq >= n - c ? sq - (n - c) : sq + c;
    };
    std::uint64_t x = 2, y = 2, ys = 2, q = 1, g = 1;
    std::uint64_t r = 1, iterations = 0;
    while (g == 1 && iterations < kMaxIterations) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = step(y);
      std::uint64_t k = 0;
      while (k < r && g == 1) {
        ys = y;
        const std::uint64_t limit = std::min(kBatch, r - k);
        for (std::uint64_t i = 0; i < limit; ++i) {
          y = step(y);
          q = mul(q, diff(x, y));
        }
        g = std::gcd(q, n);
        k += kBatch;
      }
      iterations += r;
      r *= 2;
    }
    if (g == n) {
      do {
        ys = step(ys);
        g = std::gcd(diff(x, ys), n);
      } while (g == 1);
    }
    if (g != 1 && g != n) return g;
  }
  throw FactorizationError("rho failed to split " + std::to_string(n));
}

void factor_into(std::uint64_t n, FactorBuffer& out, std::uint32_t multiplicity) {
  if (n == 0) throw std::invalid_argument("cannot factor 0");
  if (n == 1) return;
  const int tz = std::countr_zero(n);
  if (tz != 0) {
    out.push(2, static_cast<std::uint32_t>(tz) * multiplicity);
    n >>= tz;
  }
  if (n >= SmallSieve::kLimit) {
    const auto primes = SmallSieve::instance().primes();
    for (std::size_t i = 1; primes[i] <= kTrialDivisionBound; ++i) {
      const std::uint64_t p = primes[i];
      if (n % p != 0) continue;
      std::uint32_t e = 0;
      do {
        n /= p;
        ++e;
      } while (n % p == 0);
      out.push(p, e * multiplicity);
      if (n < SmallSieve::kLimit) break;
    }
  }
  factor_rough(n, out, multiplicity);
}

std::uint64_t isqrt(std::uint64_t n) noexcept {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace busp
