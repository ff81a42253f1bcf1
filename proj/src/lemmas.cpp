#include "busp/lemmas.hpp"

#include <bit>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "busp/arith.hpp"

namespace busp {
namespace {

using boost::multiprecision::cpp_int;
using u128 = unsigned __int128;

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  u128 result = 1 % m;
  u128 b = base % m;
  while (exp != 0) {
    if (exp & 1) result = result * b % m;
    b = b * b % m;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

bool is_power_of_two(std::uint64_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

// Rational with positive denominator, compared exactly by cross-multiplication.
struct Ratio {
  cpp_int num;
  cpp_int den;
};

int compare(const Ratio& x, const Ratio& y) {
  const cpp_int lhs = x.num * y.den;
  const cpp_int rhs = y.num * x.den;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

cpp_int big_pow(std::uint64_t p, std::uint32_t e) {
  cpp_int r = 1;
  for (std::uint32_t i = 0; i < e; ++i) r *= p;
  return r;
}

// sigma_bu(p^e) summed term by term over the biunitary exponents.
cpp_int big_sigma_bu(std::uint64_t p, std::uint32_t e) {
  cpp_int s = 0;
  cpp_int term = 1;
  for (std::uint32_t i = 0; i <= e; ++i) {
    if (!(e % 2 == 0 && i == e / 2)) s += term;
    term *= p;
  }
  return s;
}

Ratio sigma_ratio(std::uint64_t p, std::uint32_t e) { return {big_sigma_bu(p, e), big_pow(p, e)}; }

// 1 + 1/p + ... + 1/p^m
Ratio partial_geometric(std::uint64_t p, std::uint32_t m) {
  cpp_int num = 0;
  for (std::uint32_t i = 0; i <= m; ++i) num = num * p + 1;
  return {num, big_pow(p, m)};
}

std::uint64_t least_primitive_by_factoring(std::uint64_t a, std::uint64_t n, std::uint64_t value) {
  for (const PrimePower& pp : factorize(value)) {
    bool primitive = true;
    for (std::uint64_t m = 1; m < n && primitive; ++m) primitive = pow_mod(a, m, pp.prime) != 1;
    if (primitive) return pp.prime;
  }
  return 0;
}

// a^n - 1 when it fits 64 bits.
std::optional<std::uint64_t> small_power_minus_one(std::uint64_t a, std::uint64_t n) {
  try {
    return checked::pow(a, static_cast<std::uint32_t>(n)) - 1;
  } catch (const OverflowError&) {
    return std::nullopt;
  }
}

std::string case_list(const std::map<std::string, int>& tally) {
  std::string out;
  for (const auto& [key, count] : tally) {
    if (!out.empty()) out += "; ";
    out += key + " (x" + std::to_string(count) + ")";
  }
  return out;
}

}  // namespace

std::string_view to_string(LemmaId id) noexcept {
  switch (id) {
    case LemmaId::Parity: return "Parity";
    case LemmaId::RatioBound: return "RatioBound";
    case LemmaId::Bang: return "Bang";
    case LemmaId::Classification2aqb: return "Classification2aqb";
    case LemmaId::NamedSets: return "NamedSets";
  }
  return "?";
}

std::string_view to_string(PrimePowerClass::Case c) noexcept {
  switch (c) {
    case PrimePowerClass::Case::A_e1: return "A_e1";
    case PrimePowerClass::Case::B_e2: return "B_e2";
    case PrimePowerClass::Case::C_e3_mersenne: return "C_e3_mersenne";
    case PrimePowerClass::Case::D_e4_mersenne: return "D_e4_mersenne";
    case PrimePowerClass::Case::NotOfForm: return "NotOfForm";
  }
  return "?";
}

void LemmaReport::fail(std::vector<std::uint64_t> input, std::string reason) {
  passed = false;
  counterexamples.push_back(Counterexample{std::move(input), std::move(reason)});
}

LemmaReport check_parity(std::uint64_t n_max) {
  return check_parity(n_max, [](std::uint64_t n) { return sigma_bu(n); });
}

LemmaReport check_parity(std::uint64_t n_max, const SigmaFn& sigma) {
  if (n_max > kParityMax) throw std::invalid_argument("check_parity: n_max above " + std::to_string(kParityMax));
  LemmaReport report;
  report.lemma_id = LemmaId::Parity;
  report.domain_descriptor = "1 <= n <= " + std::to_string(n_max);
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const std::uint64_t s = sigma(n);
    const bool odd = (s & 1) != 0;
    if (odd != is_power_of_two(n)) {
      report.fail({n, s}, odd ? "sigma_bu odd but n is not a power of 2" : "sigma_bu even but n is a power of 2");
      continue;
    }
    const std::uint32_t w = omega(factorize(n));
    const std::uint32_t required = (n & 1) ? w : w - 1;
    const auto v2 = static_cast<std::uint32_t>(std::countr_zero(s));
    if (v2 < required) {
      report.fail({n, s}, "v2(sigma_bu) = " + std::to_string(v2) + " < " + std::to_string(required));
    }
  }
  return report;
}

LemmaReport check_ratio_bounds(std::uint64_t p_max, std::uint32_t e_max, std::uint32_t m_max) {
  LemmaReport report;
  report.lemma_id = LemmaId::RatioBound;
  report.domain_descriptor = "primes p <= " + std::to_string(p_max) + ", 1 <= e <= " + std::to_string(e_max) +
                             ", 1 <= m <= " + std::to_string(m_max) + " with e >= 2m-1";
  std::map<std::string, int> tight;

  for (std::uint64_t p : SmallSieve::instance().primes_up_to(p_max)) {
    const Ratio one_plus_inv_p2{cpp_int(p) * p + 1, cpp_int(p) * p};
    const Ratio one_plus_inv_p{cpp_int(p) + 1, cpp_int(p)};
    const Ratio three_term{(cpp_int(p) + 1) * (big_pow(p, 3) + 1), big_pow(p, 4)};

    for (std::uint32_t e = 1; e <= e_max; ++e) {
      const Ratio r = sigma_ratio(p, e);

      // The 64-bit evaluator must agree wherever it does not overflow.
      try {
        if (cpp_int(sigma_bu_prime_power(p, e)) != r.num) report.fail({p, e}, "64-bit sigma_bu(p^e) disagrees");
      } catch (const OverflowError&) {
      }

      const int c1 = compare(r, one_plus_inv_p2);
      if (c1 < 0) report.fail({p, e}, "ratio < 1 + 1/p^2");
      if (c1 == 0) ++tight["ratio = 1 + 1/p^2 at e=" + std::to_string(e)];

      const int c2 = compare(r, one_plus_inv_p);
      if (e != 2 && c2 < 0) report.fail({p, e}, "ratio < 1 + 1/p with e != 2");
      if (e == 2 && c2 >= 0) report.fail({p, e}, "e = 2 expected strictly below 1 + 1/p");
      if (c2 == 0) ++tight["ratio = 1 + 1/p at e=" + std::to_string(e)];

      if (e >= 3) {
        const int c3 = compare(r, three_term);
        if (c3 < 0) report.fail({p, e}, "ratio < (1 + 1/p)(1 + 1/p^3) with e >= 3");
        if (c3 == 0) ++tight["ratio = (1 + 1/p)(1 + 1/p^3) at e=" + std::to_string(e)];
      }

      for (std::uint32_t m = 1; m <= m_max; ++m) {
        if (e + 1 < 2 * m) continue;
        const Ratio at_2m = sigma_ratio(p, 2 * m);
        const Ratio geometric = partial_geometric(p, m);

        const int c4 = compare(r, at_2m);
        if (c4 < 0) report.fail({p, e, m}, "ratio below its value at e = 2m");
        if (c4 == 0 && e != 2 * m) ++tight["ratio(e) = ratio(2m) at e=" + std::to_string(e) + ",m=" + std::to_string(m)];

        if (e != 2 * m) {
          const int c5 = compare(r, geometric);
          if (c5 < 0) report.fail({p, e, m}, "ratio < 1 + 1/p + ... + 1/p^m with e != 2m");
          if (c5 == 0) ++tight["ratio = 1 + ... + 1/p^m at e=" + std::to_string(e) + ",m=" + std::to_string(m)];
        }
        if (compare(at_2m, geometric) >= 0) report.fail({p, 2 * m, m}, "ratio(2m) not below 1 + ... + 1/p^m");
      }
    }
  }
  if (!tight.empty()) report.notes.push_back("equality cases: " + case_list(tight));
  return report;
}

bool is_bang_exception(std::uint64_t a, std::uint64_t n) noexcept {
  if (a == 2 && (n == 1 || n == 6)) return true;
  return n == 2 && is_power_of_two(a + 1);
}

std::uint64_t cyclotomic_value(std::uint64_t n, std::uint64_t a) {
  if (n == 0 || a < 2) throw std::invalid_argument("cyclotomic_value: need n >= 1 and a >= 2");
  std::map<std::uint64_t, cpp_int> memo;
  auto eval = [&](auto&& self, std::uint64_t k) -> cpp_int {
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    cpp_int v = big_pow(a, static_cast<std::uint32_t>(k)) - 1;
    for (std::uint64_t d = 1; d < k; ++d) {
      if (k % d == 0) v /= self(self, d);
    }
    memo.emplace(k, v);
    return v;
  };
  const cpp_int v = eval(eval, n);
  if (v > cpp_int(std::numeric_limits<std::uint64_t>::max())) throw OverflowError("Phi_n(a) exceeds 64 bits");
  return static_cast<std::uint64_t>(v);
}

PrimitivePrime find_primitive_prime(std::uint64_t a, std::uint64_t n) {
  if (a < 2 || n == 0) throw std::invalid_argument("find_primitive_prime: need a >= 2 and n >= 1");
  const std::uint64_t phi = cyclotomic_value(n, a);
  for (const PrimePower& pp : factorize(phi)) {
    const std::uint64_t q = pp.prime;
    if (pow_mod(a, n, q) != 1) continue;
    bool primitive = true;
    for (std::uint64_t m = 1; m < n && primitive; ++m) primitive = pow_mod(a, m, q) != 1;
    if (primitive) return {PrimitivePrime::Kind::Found, q};
  }
  return {is_bang_exception(a, n) ? PrimitivePrime::Kind::Exception : PrimitivePrime::Kind::Missing, 0};
}

LemmaReport check_bang(std::uint64_t a_max, std::uint64_t n_max) {
  LemmaReport report;
  report.lemma_id = LemmaId::Bang;
  report.domain_descriptor = "2 <= a <= " + std::to_string(a_max) + ", 1 <= n <= " + std::to_string(n_max) + ", b = 1";
  int exceptions = 0;
  int cross_checked = 0;
  for (std::uint64_t a = 2; a <= a_max; ++a) {
    for (std::uint64_t n = 1; n <= n_max; ++n) {
      const PrimitivePrime r = find_primitive_prime(a, n);
      const bool predicted = is_bang_exception(a, n);
      switch (r.kind) {
        case PrimitivePrime::Kind::Missing:
          report.fail({a, n}, "no primitive prime factor outside the exception set");
          continue;
        case PrimitivePrime::Kind::Exception:
          ++exceptions;
          break;
        case PrimitivePrime::Kind::Found:
          if (predicted) report.fail({a, n, r.prime}, "primitive prime found for an exceptional pair");
          if (r.prime % n != 1 % n) report.fail({a, n, r.prime}, "primitive prime not congruent to 1 mod n");
          if (pow_mod(a, n, r.prime) != 1) report.fail({a, n, r.prime}, "prime does not divide a^n - 1");
          break;
      }
      // Second route: factor a^n - 1 directly when it fits.
      if (const auto full = small_power_minus_one(a, n); full && *full > 0) {
        ++cross_checked;
        const std::uint64_t direct = least_primitive_by_factoring(a, n, *full);
        if (direct != r.prime) report.fail({a, n, r.prime, direct}, "direct factoring of a^n - 1 disagrees");
      }
    }
  }
  report.notes.push_back(std::to_string(exceptions) + " exceptional pairs without a primitive prime; " +
                         std::to_string(cross_checked) + " pairs cross-checked by factoring a^n - 1");
  return report;
}

PrimePowerClass classify_2aqb(std::uint64_t p, std::uint32_t e) {
  if (p < 3 || !is_prime(p)) throw std::invalid_argument("classify_2aqb: p must be an odd prime");
  if (e == 0) throw std::invalid_argument("classify_2aqb: e must be >= 1");
  using Case = PrimePowerClass::Case;

  const std::uint64_t s = sigma_bu_prime_power(p, e);
  PrimePowerClass out;
  out.a = static_cast<std::uint32_t>(std::countr_zero(s));
  const std::uint64_t odd_part = s >> out.a;
  if (odd_part == 1) {
    out.pure_power_of_two = true;
    out.case_tag = e == 1 ? Case::A_e1 : Case::NotOfForm;
    return out;
  }
  const Factorization f = factorize(odd_part);
  if (f.pairs().size() != 1) return out;
  out.q = f.pairs()[0].prime;
  out.b = f.pairs()[0].exponent;
  out.of_form = true;

  const std::uint64_t qb = odd_part;
  switch (e) {
    case 1:
      out.case_tag = Case::A_e1;
      break;
    case 2:
      if (out.a == 1 && checked::add(checked::mul(p, p), 1) == 2 * qb) out.case_tag = Case::B_e2;
      break;
    case 3: {
      if (out.a < 2 || out.a - 1 >= 64) break;
      const std::uint64_t mersenne = (std::uint64_t{1} << (out.a - 1)) - 1;
      if (mersenne == p && is_prime(mersenne) && checked::add(checked::mul(p, p), 1) == 2 * qb) {
        out.case_tag = Case::C_e3_mersenne;
      }
      break;
    }
    case 4: {
      if (out.a % 2 != 0 || out.a / 2 >= 64) break;
      const std::uint64_t mersenne = (std::uint64_t{1} << (out.a / 2)) - 1;
      if (mersenne == p && is_prime(mersenne) && checked::mul(p, p) - p + 1 == qb) {
        out.case_tag = Case::D_e4_mersenne;
      }
      break;
    }
    default:
      break;
  }
  return out;
}

LemmaReport check_classification(std::uint64_t p_max, std::uint32_t e_max) {
  using Case = PrimePowerClass::Case;
  LemmaReport report;
  report.lemma_id = LemmaId::Classification2aqb;
  report.domain_descriptor = "odd primes p <= " + std::to_string(p_max) + ", 1 <= e <= " + std::to_string(e_max);
  std::map<std::string, int> tally;
  for (std::uint64_t p : SmallSieve::instance().primes_up_to(p_max)) {
    if (p == 2) continue;
    for (std::uint32_t e = 1; e <= e_max; ++e) {
      const PrimePowerClass c = classify_2aqb(p, e);
      if (c.of_form && c.case_tag == Case::NotOfForm) {
        report.fail({p, e}, e >= 5 ? "sigma_bu(p^e) = 2^a q^b with e >= 5" : "2^a q^b form without its side conditions");
        continue;
      }
      if (c.case_tag == Case::NotOfForm) continue;
      const std::uint64_t s = sigma_bu_prime_power(p, e);
      const std::uint64_t rebuilt = checked::mul(checked::pow(2, c.a), c.q ? checked::pow(*c.q, c.b) : 1);
      if (rebuilt != s) report.fail({p, e}, "2^a q^b does not reproduce sigma_bu(p^e)");
      if (c.case_tag == Case::C_e3_mersenne || c.case_tag == Case::D_e4_mersenne) {
        const std::uint32_t k = c.case_tag == Case::C_e3_mersenne ? c.a - 1 : c.a / 2;
        if (!is_prime((std::uint64_t{1} << k) - 1)) report.fail({p, e}, "Mersenne side condition not certified");
      }
      ++tally[std::string(to_string(c.case_tag)) + (c.pure_power_of_two ? "(b=0)" : "")];
      if (c.case_tag == Case::C_e3_mersenne || c.case_tag == Case::D_e4_mersenne) {
        report.notes.push_back(std::string(to_string(c.case_tag)) + ": p=" + std::to_string(p) + " e=" +
                               std::to_string(e) + " sigma_bu=" + std::to_string(s));
      }
    }
  }
  if (!tally.empty()) report.notes.push_back("cases: " + case_list(tally));
  return report;
}

LemmaReport check_sbu_pow2_prime_power(std::uint32_t e_max) {
  LemmaReport report;
  report.lemma_id = LemmaId::Classification2aqb;
  report.domain_descriptor = "sigma_bu(2^e), 1 <= e <= " + std::to_string(e_max);
  std::string hits;
  for (std::uint32_t e = 1; e <= e_max; ++e) {
    const std::uint64_t s = sigma_bu_prime_power(2, e);
    if (factorize(s).pairs().size() != 1) continue;
    hits += (hits.empty() ? "" : ", ") + std::to_string(e);
    if (e > 4) report.fail({e, s}, "sigma_bu(2^e) is a prime power with e > 4");
  }
  report.notes.push_back("prime power at e in {" + hits + "}");
  return report;
}

LemmaReport check_case_constants() {
  LemmaReport report;
  report.lemma_id = LemmaId::Classification2aqb;
  report.domain_descriptor = "case-analysis constants";
  struct Identity {
    const char* label;
    std::uint64_t actual;
    std::uint64_t expected;
  };
  const Identity identities[] = {
      {"sigma_bu(2^2) = 5", sigma_bu_prime_power(2, 2), 5},
      {"sigma_bu(2^4) = 3^3", sigma_bu_prime_power(2, 4), 27},
      {"sigma_bu(3^2) = 10", sigma_bu_prime_power(3, 2), 10},
      {"sigma_bu(3^4) = 112", sigma_bu_prime_power(3, 4), 112},
      {"sigma_bu(5^2) = 2 * 13", sigma_bu_prime_power(5, 2), 26},
      {"sigma_bu(13) = 2 * 7", sigma_bu_prime_power(13, 1), 14},
      {"sigma_bu(13^2) = 2 * 5 * 17", sigma_bu_prime_power(13, 2), 170},
      {"sigma_bu(17^2) / 10 = 29", sigma_bu_prime_power(17, 2) / 10, 29},
      {"sigma_bu(17^2) mod 10 = 0", sigma_bu_prime_power(17, 2) % 10, 0},
      {"sigma_bu(239^2) = 2 * 13^4", sigma_bu_prime_power(239, 2), 2 * 28561},
      // (27/16)(112/81) = 7/3
      {"sigma_bu(2^4) * sigma_bu(3^4) * 3 = 7 * 2^4 * 3^4", 27 * 112 * 3, 7 * 16 * 81},
  };
  for (const Identity& id : identities) {
    if (id.actual != id.expected) report.fail({id.actual, id.expected}, id.label);
  }
  report.notes.push_back(std::to_string(std::size(identities)) + " identities checked");
  return report;
}

}  // namespace busp
