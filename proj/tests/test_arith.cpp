#include <doctest.h>

#include <limits>
#include <random>

#include "busp/arith.hpp"
#include "busp/errors.hpp"
#include "busp/primes.hpp"
#include "oracle.hpp"

using namespace busp;

TEST_CASE("sigma_bu on small prime powers") {
  CHECK(sigma_bu_prime_power(2, 1) == 3);
  CHECK(sigma_bu_prime_power(2, 2) == 5);
  CHECK(sigma_bu_prime_power(2, 3) == 15);
  CHECK(sigma_bu_prime_power(2, 4) == 27);
  CHECK(sigma_bu_prime_power(3, 2) == 10);
  CHECK(sigma_bu_prime_power(3, 3) == 40);
  CHECK(sigma_bu_prime_power(3, 4) == 112);
  CHECK(sigma_bu_prime_power(13, 2) == 170);
  CHECK(sigma_bu_prime_power(239, 2) == 57122);
}

TEST_CASE("sigma_bu of small n matches the unitary-gcd definition") {
  for (std::uint64_t n = 1; n <= 3000; ++n) {
    CAPTURE(n);
    CHECK(sigma_bu(n) == oracle::sigma_bu(n));
  }
}

TEST_CASE("divisor-enumeration oracle agrees with the formula path up to 10^5") {
  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    if (sigma_bu_oracle(n) != sigma_bu(n)) {
      FAIL("mismatch at n = " << n);
    }
  }
}

TEST_CASE("sigma_bu_oracle rejects out-of-range input") {
  CHECK_THROWS_AS(sigma_bu_oracle(0), std::invalid_argument);
  CHECK_THROWS_AS(sigma_bu_oracle(kOracleBound + 1), std::invalid_argument);
  CHECK(sigma_bu_oracle(kOracleBound) == sigma_bu(kOracleBound));
}

TEST_CASE("three prime-power formulas agree for p < 100, e <= 40 wherever they fit") {
  for (std::uint64_t p = 2; p < 100; ++p) {
    if (!is_prime(p)) continue;
    for (std::uint32_t e = 1; e <= 40; ++e) {
      CAPTURE(p);
      CAPTURE(e);
      std::uint64_t direct = 0;
      try {
        direct = sigma_bu_prime_power(p, e);
      } catch (const OverflowError&) {
        CHECK_THROWS_AS(sigma_bu_prime_power_two_case(p, e), OverflowError);
        CHECK_THROWS_AS(sigma_bu_prime_power_floor_form(p, e), OverflowError);
        continue;
      }
      CHECK(sigma_bu_prime_power_two_case(p, e) == direct);
      CHECK(sigma_bu_prime_power_floor_form(p, e) == direct);
    }
  }
}

TEST_CASE("prime-power sandwich: sigma(p^e) - p^(e/2) <= sigma_bu(p^e) <= sigma(p^e)") {
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 31u, 97u}) {
    for (std::uint32_t e = 1; e <= 8; ++e) {
      const std::uint64_t n = checked::pow(p, e);
      const std::uint64_t full = sigma_classic(n);
      const std::uint64_t s = sigma_bu(n);
      CHECK(s <= full);
      if (e % 2) {
        CHECK(s == full);
      } else {
        CHECK(s == full - checked::pow(p, e / 2));
      }
    }
  }
}

TEST_CASE("sigma_bu is multiplicative on random coprime pairs") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<std::uint64_t> dist(1, 200'000);
  int tried = 0;
  while (tried < 2000) {
    const std::uint64_t a = dist(rng);
    const std::uint64_t b = dist(rng);
    if (std::gcd(a, b) != 1) continue;
    ++tried;
    CHECK(sigma_bu(a * b) == sigma_bu(a) * sigma_bu(b));
  }
}

TEST_CASE("on squarefree n the three divisor sums coincide") {
  for (std::uint64_t n : {1ull, 6ull, 30ull, 105ull, 2310ull}) {
    CHECK(sigma_bu(n) == sigma_unitary(n));
    CHECK(sigma_bu(n) == sigma_classic(n));
  }
  CHECK(sigma_unitary(12) == 20);
  CHECK(sigma_classic(12) == 28);
  CHECK(sigma_bu(12) == 20);
  CHECK(sigma_bu(36) == 50);
}

TEST_CASE("sigma_unitary matches its definition") {
  for (std::uint64_t n = 1; n <= 2000; ++n) {
    CHECK(sigma_unitary(n) == oracle::sigma_unitary(n));
  }
}

TEST_CASE("prime-power overflow is reported, not wrapped") {
  CHECK_THROWS_AS(sigma_bu_prime_power(2, 64), OverflowError);
  CHECK_NOTHROW(sigma_bu_prime_power(2, 63));
  CHECK(sigma_bu_prime_power(2, 63) == std::numeric_limits<std::uint64_t>::max());
  CHECK_THROWS_AS(sigma_bu_prime_power(1, 3), std::invalid_argument);
  CHECK_THROWS_AS(sigma_bu_prime_power(3, 0), std::invalid_argument);
}

TEST_CASE("factorize round-trips and matches trial division") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> small(1, 1ull << 26);
  for (int i = 0; i < 3000; ++i) {
    const std::uint64_t n = small(rng);
    const Factorization f = factorize(n);
    CHECK(f.value() == n);
    const auto expected = oracle::trial_factor(n);
    REQUIRE(f.pairs().size() == expected.size());
    for (std::size_t j = 0; j < expected.size(); ++j) {
      CHECK(f.pairs()[j].prime == expected[j].first);
      CHECK(f.pairs()[j].exponent == expected[j].second);
    }
  }
  std::uniform_int_distribution<std::uint64_t> big(1ull << 40, std::numeric_limits<std::uint64_t>::max());
  for (int i = 0; i < 300; ++i) {
    const std::uint64_t n = big(rng);
    const Factorization f = factorize(n);
    std::uint64_t product = 1;
    for (const PrimePower& pp : f) {
      CHECK(is_prime(pp.prime));
      product = checked::mul(product, checked::pow(pp.prime, pp.exponent));
    }
    CHECK(product == n);
  }
}

TEST_CASE("factorize handles hard semiprimes and edge values") {
  // 4294967291 and 4294967279 are the two largest primes below 2^32.
  const std::uint64_t n = 4294967291ull * 4294967279ull;
  const Factorization f = factorize(n);
  REQUIRE(f.pairs().size() == 2);
  CHECK(f.pairs()[0].prime == 4294967279ull);
  CHECK(f.pairs()[1].prime == 4294967291ull);
  CHECK(factorize(1).is_one());
  CHECK(factorize(1ull << 63).pairs()[0] == PrimePower{2, 63});
  CHECK(factorize(18446744073709551557ull).pairs().size() == 1);
  CHECK_THROWS_AS(factorize(0), std::invalid_argument);
}

TEST_CASE("Factorization::from_pairs enforces canonical form") {
  CHECK(Factorization::from_pairs({{2, 3}, {5, 1}}).value() == 40);
  CHECK_THROWS_AS(Factorization::from_pairs({{5, 1}, {2, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(Factorization::from_pairs({{4, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Factorization::from_pairs({{3, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Factorization::from_pairs({{2, 64}}), OverflowError);
}

TEST_CASE("valuation and omega") {
  CHECK(valuation(96, 2) == Valuation{2, 5});
  CHECK(valuation(96, 3) == Valuation{3, 1});
  CHECK(valuation(96, 5) == Valuation{5, 0});
  CHECK_THROWS_AS(valuation(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(valuation(12, 4), std::invalid_argument);
  CHECK(omega(factorize(1)) == 0);
  CHECK(omega(factorize(11975040)) == 5);
}

TEST_CASE("checked arithmetic") {
  const auto max = std::numeric_limits<std::uint64_t>::max();
  CHECK(checked::add(max - 1, 1) == max);
  CHECK_THROWS_AS(checked::add(max, 1), OverflowError);
  CHECK_THROWS_AS(checked::mul(1ull << 32, 1ull << 32), OverflowError);
  CHECK(checked::pow(3, 40) == 12157665459056928801ull);
  CHECK_THROWS_AS(checked::pow(3, 41), OverflowError);
}

TEST_CASE("primality agrees with the sieve and with trial division") {
  const SmallSieve& sieve = SmallSieve::instance();
  for (std::uint32_t n = 0; n < 200'000; ++n) CHECK(is_prime(n) == sieve.is_prime(n));
  // Strong pseudoprimes to several small bases.
  for (std::uint64_t n : {3215031751ull, 2152302898747ull, 3474749660383ull, 341550071728321ull,
                          3825123056546413051ull}) {
    CHECK_FALSE(is_prime(n));
  }
  CHECK(is_prime(2305843009213693951ull));  // 2^61 - 1
  CHECK(is_prime(18446744073709551557ull));
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> dist(1ull << 24, 1ull << 34);
  for (int i = 0; i < 500; ++i) {
    const std::uint64_t n = dist(rng);
    CHECK(is_prime(n) == (oracle::trial_factor(n).size() == 1 && oracle::trial_factor(n)[0].second == 1));
  }
}

TEST_CASE("isqrt is exact near perfect squares") {
  for (std::uint64_t r : {0ull, 1ull, 2ull, 1000ull, 4294967295ull}) {
    CHECK(isqrt(r * r) == r);
    if (r) CHECK(isqrt(r * r - 1) == r - 1);
  }
  CHECK(isqrt(std::numeric_limits<std::uint64_t>::max()) == 4294967295ull);
}

TEST_CASE("FactorBuffer merges repeated primes") {
  FactorBuffer buf;
  factor_into(12, buf);
  factor_into(18, buf, 2);
  buf.canonicalize();
  const auto v = buf.view();
  REQUIRE(v.size() == 2);
  CHECK(v[0] == PrimePower{2, 4});
  CHECK(v[1] == PrimePower{3, 5});
}
