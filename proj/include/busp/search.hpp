#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "busp/arith.hpp"
#include "busp/lemmas.hpp"
#include "busp/record.hpp"

namespace busp {

inline constexpr std::uint64_t kMaxSearchBound = std::uint64_t{1} << 40;
inline constexpr std::uint64_t kDefaultSegmentSize = std::uint64_t{1} << 20;

// Immutable tables shared by every segment of one search up to hi: the base
// primes p <= sqrt(hi) and, for each of them and every e with p^e <= hi,
// sigma_bu(p^e) together with its factorisation.
class SearchContext {
 public:
  struct Component {
    std::uint64_t power = 0;  // p^e
    std::uint64_t sigma = 0;  // sigma_bu(p^e)
    std::uint32_t begin = 0;  // factor range in factors()
    std::uint32_t end = 0;
  };

  explicit SearchContext(std::uint64_t hi);

  std::uint64_t hi() const noexcept { return hi_; }
  std::span<const std::uint32_t> base_primes() const noexcept { return base_primes_; }

  const Component& component(std::uint32_t prime_index, std::uint32_t exponent) const noexcept {
    return components_[offsets_[prime_index] + exponent - 1];
  }
  std::span<const PrimePower> factors(const Component& c) const noexcept {
    return {factors_.data() + c.begin, c.end - c.begin};
  }

 private:
  std::uint64_t hi_;
  std::span<const std::uint32_t> base_primes_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Component> components_;
  std::vector<PrimePower> factors_;
};

// Sieved block [lo, hi]. Each integer gets a row listing its prime powers
// p^e with p <= sqrt(hi), packed as (base prime index << 8) | e, in
// increasing p; the first entry is the smallest prime factor. What is left
// after dividing those out is 1 or a single prime.
class Segment {
 public:
  Segment() = default;
  Segment(std::uint64_t lo, std::uint64_t hi, const SearchContext& context);

  // Re-sieves in place, reusing the buffers. hi must not exceed context.hi().
  void sieve(std::uint64_t lo, std::uint64_t hi, const SearchContext& context);

  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return hi_; }

  std::span<const std::uint32_t> row(std::uint64_t n) const noexcept {
    const std::size_t i = n - lo_;
    return {rows_.data() + i * width_, counts_[i]};
  }

  // Smallest prime factor of n (1 for n = 1).
  std::uint64_t spf(std::uint64_t n) const;
  Factorization factorization(std::uint64_t n) const;

 private:
  const SearchContext* context_ = nullptr;
  std::uint64_t lo_ = 1;
  std::uint64_t hi_ = 0;
  std::size_t width_ = 0;
  std::vector<std::uint8_t> counts_;
  std::vector<std::uint32_t> rows_;
};

// Every n in the segment with n | sigma_bu(sigma_bu(n)), ascending.
// Throws OverflowError (internal error below kMaxSearchBound).
std::vector<SearchRecord> scan_segment(const Segment& segment, const SearchContext& context);

// One-shot scan of [lo, hi] as a single segment.
std::vector<SearchRecord> scan_range(std::uint64_t lo, std::uint64_t hi);

struct SearchOptions {
  std::uint64_t lo = 1;
  std::uint64_t hi = 1;
  std::uint64_t segment_size = kDefaultSegmentSize;
  unsigned workers = 1;
  // Resumed from when the file exists, rewritten after every merged segment.
  std::optional<std::filesystem::path> checkpoint_path;
  // One "segment [lo,hi] done, hits=H, elapsed=S" line per merged segment.
  std::ostream* progress = nullptr;
  // Stop cleanly once this many segments were merged in this invocation.
  std::optional<std::uint64_t> stop_after_segments;
  const std::atomic<bool>* cancel = nullptr;
};

struct SearchResult {
  std::uint64_t lo = 1;
  std::uint64_t hi = 0;
  std::uint64_t watermark = 0;
  std::vector<SearchRecord> records;
  bool completed = false;
  std::uint64_t segments_merged = 0;
};

// Splits [lo, hi] into segments, scans them on `workers` threads and merges
// in ascending order. Output is independent of the worker count, segment
// size and interruption history. Throws std::invalid_argument for bad
// bounds, CheckpointVersionError / CheckpointMismatchError for an
// incompatible checkpoint.
SearchResult run_search(const SearchOptions& options);

// sigma_bu(N) = 2N exactly for N in {6, 60, 90} among N <= 10^5, and
// sigma*(sigma*(N)) = 2N exactly for N in {2, 9, 165, 238} among N <= 238.
LemmaReport verify_named_sets();

}  // namespace busp
