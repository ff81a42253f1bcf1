#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace busp {

enum class LemmaId {
  Parity,              // sigma_bu(n) odd iff n is a power of two, plus the 2-adic bound
  RatioBound,          // lower bounds on sigma_bu(p^e)/p^e
  Bang,                // primitive prime factors of a^n - 1
  Classification2aqb,  // sigma_bu(p^e) = 2^a q^b forces e <= 4
  NamedSets,           // known biunitary perfect / unitary superperfect numbers
};

std::string_view to_string(LemmaId id) noexcept;

struct Counterexample {
  std::vector<std::uint64_t> input;
  std::string reason;
};

struct LemmaReport {
  LemmaId lemma_id = LemmaId::Parity;
  std::string domain_descriptor;
  bool passed = true;
  std::vector<Counterexample> counterexamples;
  // Observations that are not failures, e.g. where an inequality is tight.
  std::vector<std::string> notes;

  void fail(std::vector<std::uint64_t> input, std::string reason);
};

using SigmaFn = std::function<std::uint64_t(std::uint64_t)>;

inline constexpr std::uint64_t kParityMax = 10'000'000;

// For every n in [1, n_max]: sigma_bu(n) is odd iff n is a power of two,
// and v2(sigma_bu(n)) >= omega(n) for odd n, >= omega(n) - 1 for even n.
// The overload taking `sigma` replaces the evaluator so fault injection can
// be exercised. n_max > kParityMax throws std::invalid_argument.
LemmaReport check_parity(std::uint64_t n_max);
LemmaReport check_parity(std::uint64_t n_max, const SigmaFn& sigma);

// Exact rational checks of the ratio bounds on sigma_bu(p^e)/p^e for primes
// p <= p_max, 1 <= e <= e_max and 1 <= m <= m_max with e >= 2m - 1.
LemmaReport check_ratio_bounds(std::uint64_t p_max, std::uint32_t e_max, std::uint32_t m_max);

struct PrimitivePrime {
  enum class Kind {
    Found,      // prime holds the least primitive prime factor
    Exception,  // none exists and (a, n) is in the predicted exception set
    Missing,    // none exists although none was predicted (lemma violation)
  };
  Kind kind = Kind::Missing;
  std::uint64_t prime = 0;
};

// True for (2, 1), (2, 6), and n = 2 with a + 1 a power of two.
bool is_bang_exception(std::uint64_t a, std::uint64_t n) noexcept;

// Least prime dividing a^n - 1 but no a^m - 1 with m < n. The candidates are
// the prime factors of the cyclotomic value Phi_n(a), so a^n - 1 itself may
// exceed 64 bits; Phi_n(a) must fit or OverflowError is thrown. A returned
// prime is verified to be primitive by modular exponentiation.
PrimitivePrime find_primitive_prime(std::uint64_t a, std::uint64_t n);

// Cyclotomic polynomial Phi_n evaluated at a. Throws OverflowError past 64 bits.
std::uint64_t cyclotomic_value(std::uint64_t n, std::uint64_t a);

// Sweeps a in [2, a_max], n in [1, n_max]: primitive primes exist outside the
// exception set, are absent inside it, and are 1 mod n.
LemmaReport check_bang(std::uint64_t a_max, std::uint64_t n_max);

struct PrimePowerClass {
  enum class Case { A_e1, B_e2, C_e3_mersenne, D_e4_mersenne, NotOfForm };

  Case case_tag = Case::NotOfForm;
  std::uint32_t a = 0;
  std::optional<std::uint64_t> q;
  std::uint32_t b = 0;
  // sigma_bu(p^e) is a power of two (b = 0); reported on A_e1/NotOfForm.
  bool pure_power_of_two = false;
  // sigma_bu(p^e) = 2^a q^b with q an odd prime and b >= 1, independently of
  // whether the case side conditions were certified.
  bool of_form = false;
};

std::string_view to_string(PrimePowerClass::Case c) noexcept;

// Classifies sigma_bu(p^e) for an odd prime p. Cases C and D are only
// returned after certifying that p is a Mersenne prime of the required shape.
// A value of the form that fits no case (e >= 5, or failed side conditions)
// comes back as NotOfForm with of_form set.
PrimePowerClass classify_2aqb(std::uint64_t p, std::uint32_t e);

// classify_2aqb over odd primes p <= p_max and e <= e_max.
LemmaReport check_classification(std::uint64_t p_max, std::uint32_t e_max);

// sigma_bu(2^e) is a prime power only for e <= 4, checked for e <= e_max.
LemmaReport check_sbu_pow2_prime_power(std::uint32_t e_max);

// Numeric identities relied on by the case analysis for superperfect N.
LemmaReport check_case_constants();

}  // namespace busp
