#include "busp/arith.hpp"

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace busp {
namespace {

using u128 = unsigned __int128;

constexpr u128 kU64Max = std::numeric_limits<std::uint64_t>::max();

u128 pow128(std::uint64_t base, std::uint32_t exp) {
  u128 result = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    if (result > std::numeric_limits<u128>::max() / base) throw OverflowError("p^e exceeds 128 bits");
    result *= base;
  }
  return result;
}

std::uint64_t narrow(u128 v, const char* what) {
  if (v > kU64Max) throw OverflowError(std::string(what) + " exceeds 64 bits");
  return static_cast<std::uint64_t>(v);
}

void require_prime_power_args(std::uint64_t p, std::uint32_t e) {
  if (p < 2) throw std::invalid_argument("prime base must be >= 2");
  if (e == 0) throw std::invalid_argument("exponent must be >= 1");
}

std::uint64_t exponent_count(std::uint64_t n, std::uint64_t p) {
  std::uint64_t count = 0;
  while (n % p == 0) {
    n /= p;
    ++count;
  }
  return count;
}

// True when d (a divisor of n) shares no prime p with v_p(d) >= 1 and
// 2 v_p(d) = v_p(n). Plain trial division, independent of the sieve.
bool is_biunitary_divisor(std::uint64_t d, std::uint64_t n) {
  std::uint64_t rest = d;
  for (std::uint64_t p = 2; p * p <= rest; ++p) {
    if (rest % p != 0) continue;
    const std::uint64_t vd = exponent_count(rest, p);
    while (rest % p == 0) rest /= p;
    if (2 * vd == exponent_count(n, p)) return false;
  }
  if (rest > 1 && exponent_count(n, rest) == 2) return false;
  return true;
}

}  // namespace

namespace checked {

std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("addition overflows 64 bits");
  return r;
}

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("multiplication overflows 64 bits");
  return r;
}

std::uint64_t pow(std::uint64_t base, std::uint32_t exp) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < exp; ++i) r = mul(r, base);
  return r;
}

}  // namespace checked

Factorization Factorization::from_pairs(std::vector<PrimePower> pairs) {
  std::uint64_t value = 1;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const PrimePower& pp = pairs[i];
    if (pp.exponent == 0) throw std::invalid_argument("exponent must be >= 1");
    if (i > 0 && pairs[i - 1].prime >= pp.prime) throw std::invalid_argument("primes must be strictly increasing");
    if (!is_prime(pp.prime)) throw std::invalid_argument(std::to_string(pp.prime) + " is not prime");
    value = checked::mul(value, checked::pow(pp.prime, pp.exponent));
  }
  return Factorization(std::move(pairs), value);
}

Factorization factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
  FactorBuffer buf;
  factor_into(n, buf);
  buf.canonicalize();
  const auto view = buf.view();
  return Factorization(std::vector<PrimePower>(view.begin(), view.end()), n);
}

std::uint64_t sigma_bu_prime_power(std::uint64_t p, std::uint32_t e) {
  require_prime_power_args(p, e);
  if (e == 1) return checked::add(p, 1);
  // Horner over the coefficients of p^e, ..., p^0; the middle coefficient is
  // zero for even e. Every partial value is bounded by the result.
  const bool even = e % 2 == 0;
  const std::uint32_t middle = e / 2;
  std::uint64_t s = 0;
  for (std::uint32_t i = e + 1; i-- > 0;) {
    s = checked::add(checked::mul(s, p), (even && i == middle) ? 0 : 1);
  }
  return s;
}

std::uint64_t sigma_bu_prime_power_two_case(std::uint64_t p, std::uint32_t e) {
  require_prime_power_args(p, e);
  const u128 geometric = (pow128(p, e + 1) - 1) / (p - 1);
  if (e % 2 == 1) return narrow(geometric, "sigma_bu(p^e)");
  return narrow(geometric - pow128(p, e / 2), "sigma_bu(p^e)");
}

std::uint64_t sigma_bu_prime_power_floor_form(std::uint64_t p, std::uint32_t e) {
  require_prime_power_args(p, e);
  const u128 left = pow128(p, (e + 2) / 2) + 1;
  const u128 right = pow128(p, (e + 1) / 2) - 1;
  if (right != 0 && left > std::numeric_limits<u128>::max() / right) {
    throw OverflowError("sigma_bu(p^e) exceeds 128 bits");
  }
  return narrow(left * right / (p - 1), "sigma_bu(p^e)");
}

std::uint64_t sigma_bu(std::span<const PrimePower> pairs) {
  std::uint64_t s = 1;
  for (const PrimePower& pp : pairs) s = checked::mul(s, sigma_bu_prime_power(pp.prime, pp.exponent));
  return s;
}

std::uint64_t sigma_bu(const Factorization& f) { return sigma_bu(f.pairs()); }

std::uint64_t sigma_bu(std::uint64_t n) { return sigma_bu(factorize(n)); }

std::uint64_t sigma_bu_oracle(std::uint64_t n, std::uint64_t bound) {
  if (n == 0) throw std::invalid_argument("sigma_bu_oracle: n must be >= 1");
  if (n > bound) {
    throw std::invalid_argument("sigma_bu_oracle: n=" + std::to_string(n) + " above bound " + std::to_string(bound));
  }
  std::uint64_t sum = 0;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    const std::uint64_t co = n / d;
    if (is_biunitary_divisor(d, n)) sum += d;
    if (co != d && is_biunitary_divisor(co, n)) sum += co;
  }
  return sum;
}

std::uint64_t sigma_unitary(const Factorization& f) {
  std::uint64_t s = 1;
  for (const PrimePower& pp : f) s = checked::mul(s, checked::add(checked::pow(pp.prime, pp.exponent), 1));
  return s;
}

std::uint64_t sigma_unitary(std::uint64_t n) { return sigma_unitary(factorize(n)); }

std::uint64_t sigma_classic(const Factorization& f) {
  std::uint64_t s = 1;
  for (const PrimePower& pp : f) {
    std::uint64_t term = 0;
    for (std::uint32_t i = 0; i <= pp.exponent; ++i) term = checked::add(checked::mul(term, pp.prime), 1);
    s = checked::mul(s, term);
  }
  return s;
}

std::uint64_t sigma_classic(std::uint64_t n) { return sigma_classic(factorize(n)); }

std::uint32_t omega(const Factorization& f) noexcept { return static_cast<std::uint32_t>(f.pairs().size()); }

Valuation valuation(std::uint64_t n, std::uint64_t p) {
  if (n == 0) throw std::invalid_argument("valuation: n must be >= 1");
  if (!is_prime(p)) throw std::invalid_argument("valuation: base " + std::to_string(p) + " is not prime");
  return Valuation{p, static_cast<std::uint32_t>(exponent_count(n, p))};
}

}  // namespace busp
