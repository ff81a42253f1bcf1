#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "busp/search.hpp"

namespace busp {
namespace {

// Largest number of distinct primes an integer <= hi can have.
std::size_t max_distinct_primes(std::uint64_t hi) {
  std::size_t count = 0;
  std::uint64_t primorial = 1;
  for (std::uint64_t p : SmallSieve::instance().primes()) {
    if (primorial > hi / p) break;
    primorial *= p;
    ++count;
  }
  return std::max<std::size_t>(count, 1);
}

}  // namespace

SearchContext::SearchContext(std::uint64_t hi) : hi_(hi) {
  if (hi == 0 || hi > kMaxSearchBound) {
    throw std::invalid_argument("search bound must be in [1, 2^40], got " + std::to_string(hi));
  }
  base_primes_ = SmallSieve::instance().primes_up_to(isqrt(hi));
  offsets_.reserve(base_primes_.size());
  FactorBuffer buf;
  for (std::uint64_t p : base_primes_) {
    offsets_.push_back(static_cast<std::uint32_t>(components_.size()));
    std::uint64_t power = p;
    for (std::uint32_t e = 1;; ++e) {
      Component c;
      c.power = power;
      c.sigma = sigma_bu_prime_power(p, e);
      buf.clear();
      factor_into(c.sigma, buf);
      buf.canonicalize();
      c.begin = static_cast<std::uint32_t>(factors_.size());
      factors_.insert(factors_.end(), buf.view().begin(), buf.view().end());
      c.end = static_cast<std::uint32_t>(factors_.size());
      components_.push_back(c);
      if (power > hi / p) break;
      power *= p;
    }
  }
}

Segment::Segment(std::uint64_t lo, std::uint64_t hi, const SearchContext& context) { sieve(lo, hi, context); }

void Segment::sieve(std::uint64_t lo, std::uint64_t hi, const SearchContext& context) {
  if (lo == 0 || lo > hi) throw std::invalid_argument("segment needs 1 <= lo <= hi");
  if (hi > context.hi()) throw std::invalid_argument("segment exceeds the context bound");
  context_ = &context;
  lo_ = lo;
  hi_ = hi;
  width_ = max_distinct_primes(hi);
  const std::size_t size = hi - lo + 1;
  counts_.assign(size, 0);
  rows_.resize(size * width_);

  const auto primes = context.base_primes();
  for (std::uint32_t idx = 0; idx < primes.size(); ++idx) {
    const std::uint64_t p = primes[idx];
    if (p * p > hi) break;
    const std::uint32_t tag = (idx << 8) | 1u;
    for (std::uint64_t m = (lo + p - 1) / p * p; m <= hi; m += p) {
      const std::size_t i = m - lo;
      rows_[i * width_ + counts_[i]++] = tag;
    }
    // Multiples of p^k bump the exponent of the entry just written for p.
    for (std::uint64_t pk = p * p; pk <= hi; pk *= p) {
      for (std::uint64_t m = (lo + pk - 1) / pk * pk; m <= hi; m += pk) {
        const std::size_t i = m - lo;
        ++rows_[i * width_ + counts_[i] - 1];
      }
      if (pk > hi / p) break;
    }
  }
}

std::uint64_t Segment::spf(std::uint64_t n) const {
  if (n < lo_ || n > hi_) throw std::out_of_range("n outside the segment");
  const auto r = row(n);
  if (r.empty()) return n;
  return context_->base_primes()[r[0] >> 8];
}

Factorization Segment::factorization(std::uint64_t n) const {
  if (n < lo_ || n > hi_) throw std::out_of_range("n outside the segment");
  std::vector<PrimePower> pairs;
  std::uint64_t rest = n;
  for (std::uint32_t packed : row(n)) {
    const PrimePower pp{context_->base_primes()[packed >> 8], packed & 0xffu};
    pairs.push_back(pp);
    rest /= context_->component(packed >> 8, pp.exponent).power;
  }
  if (rest > 1) pairs.push_back(PrimePower{rest, 1});
  return Factorization::from_pairs(std::move(pairs));
}

std::vector<SearchRecord> scan_segment(const Segment& segment, const SearchContext& context) {
  std::vector<SearchRecord> hits;
  FactorBuffer buf;
  for (std::uint64_t n = segment.lo(); n <= segment.hi(); ++n) {
    buf.clear();
    std::uint64_t s1 = 1;
    std::uint64_t smooth = 1;
    for (std::uint32_t packed : segment.row(n)) {
      const auto& c = context.component(packed >> 8, packed & 0xffu);
      s1 = checked::mul(s1, c.sigma);
      smooth *= c.power;
      buf.append(context.factors(c));
    }
    const std::uint64_t large = n / smooth;
    if (large > 1) {
      s1 = checked::mul(s1, large + 1);
      factor_into(large + 1, buf);
    }
    buf.canonicalize();
    std::uint64_t s2 = 1;
    for (const PrimePower& pp : buf.view()) s2 = checked::mul(s2, sigma_bu_prime_power(pp.prime, pp.exponent));
    if (s2 % n != 0) continue;
    const std::uint64_t k = s2 / n;
    if (k > std::numeric_limits<std::uint32_t>::max()) throw OverflowError("multiplier k exceeds 32 bits");
    hits.push_back(SearchRecord{n, s1, s2, static_cast<std::uint32_t>(k)});
  }
  return hits;
}

std::vector<SearchRecord> scan_range(std::uint64_t lo, std::uint64_t hi) {
  const SearchContext context(hi);
  const Segment segment(lo, hi, context);
  return scan_segment(segment, context);
}

}  // namespace busp
