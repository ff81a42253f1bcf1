#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "busp/checkpoint.hpp"
#include "busp/search.hpp"

namespace busp {
namespace {

void validate(const SearchOptions& options) {
  if (options.lo < 1) throw std::invalid_argument("lo must be >= 1");
  if (options.lo > options.hi) throw std::invalid_argument("lo must not exceed hi");
  if (options.hi > kMaxSearchBound) throw std::invalid_argument("hi must not exceed 2^40");
  if (options.segment_size == 0) throw std::invalid_argument("segment size must be positive");
  if (options.workers == 0) throw std::invalid_argument("worker count must be positive");
}

}  // namespace

SearchResult run_search(const SearchOptions& options) {
  validate(options);
  const auto started = std::chrono::steady_clock::now();

  Checkpoint state;
  state.lo = options.lo;
  state.hi = options.hi;
  state.watermark = options.lo - 1;
  if (options.checkpoint_path && std::filesystem::exists(*options.checkpoint_path)) {
    state = load_checkpoint(*options.checkpoint_path);
    if (state.lo != options.lo || state.hi != options.hi) {
      throw CheckpointMismatchError("checkpoint covers [" + std::to_string(state.lo) + ", " + std::to_string(state.hi) +
                                    "], requested [" + std::to_string(options.lo) + ", " +
                                    std::to_string(options.hi) + "]");
    }
  }

  SearchResult result;
  result.lo = options.lo;
  result.hi = options.hi;

  const std::uint64_t start = state.watermark + 1;
  const std::uint64_t segment_count =
      start > options.hi ? 0 : (options.hi - start) / options.segment_size + 1;

  if (segment_count > 0) {
    const SearchContext context(options.hi);
    auto segment_bounds = [&](std::uint64_t index) {
      const std::uint64_t lo = start + index * options.segment_size;
      const std::uint64_t hi = options.hi - lo < options.segment_size ? options.hi : lo + options.segment_size - 1;
      return std::pair{lo, hi};
    };

    std::mutex mutex;
    std::condition_variable ready;
    std::map<std::uint64_t, std::vector<SearchRecord>> finished;
    std::exception_ptr failure;
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> stop{false};

    auto worker = [&] {
      try {
        Segment segment;
        while (!stop.load()) {
          const std::uint64_t index = next.fetch_add(1);
          if (index >= segment_count) break;
          const auto [lo, hi] = segment_bounds(index);
          segment.sieve(lo, hi, context);
          auto hits = scan_segment(segment, context);
          {
            std::lock_guard lock(mutex);
            finished.emplace(index, std::move(hits));
          }
          ready.notify_all();
        }
      } catch (...) {
        {
          std::lock_guard lock(mutex);
          if (!failure) failure = std::current_exception();
        }
        stop = true;
        ready.notify_all();
      }
    };

    const unsigned thread_count =
        static_cast<unsigned>(std::min<std::uint64_t>(options.workers, segment_count));
    std::vector<std::jthread> threads;
    threads.reserve(thread_count);
    for (unsigned i = 0; i < thread_count; ++i) threads.emplace_back(worker);

    for (std::uint64_t index = 0; index < segment_count; ++index) {
      std::vector<SearchRecord> hits;
      {
        std::unique_lock lock(mutex);
        ready.wait(lock, [&] { return failure || finished.contains(index); });
        if (failure) break;
        auto node = finished.extract(index);
        hits = std::move(node.mapped());
      }
      const auto [lo, hi] = segment_bounds(index);
      state.records.insert(state.records.end(), hits.begin(), hits.end());
      state.watermark = hi;
      ++result.segments_merged;
      if (options.checkpoint_path) save_checkpoint(*options.checkpoint_path, state);
      if (options.progress) {
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        char seconds[32];
        std::snprintf(seconds, sizeof seconds, "%.3f", elapsed);
        *options.progress << "segment [" << lo << "," << hi << "] done, hits=" << hits.size()
                          << ", elapsed=" << seconds << std::endl;
      }
      const bool cancelled = options.cancel && options.cancel->load();
      if (cancelled || (options.stop_after_segments && result.segments_merged >= *options.stop_after_segments)) {
        break;
      }
    }
    stop = true;
    threads.clear();
    if (failure) std::rethrow_exception(failure);
  }

  result.watermark = state.watermark;
  result.records = std::move(state.records);
  result.completed = result.watermark == options.hi;
  return result;
}

LemmaReport verify_named_sets() {
  LemmaReport report;
  report.lemma_id = LemmaId::NamedSets;
  report.domain_descriptor = "sigma_bu(N) = 2N for N <= 100000; sigma*(sigma*(N)) = 2N for N <= 238";

  const std::vector<std::uint64_t> perfect_expected{6, 60, 90};
  std::vector<std::uint64_t> perfect;
  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    if (sigma_bu(n) == 2 * n) perfect.push_back(n);
  }
  if (perfect != perfect_expected) {
    report.fail(perfect, "biunitary perfect numbers up to 100000 differ from {6, 60, 90}");
  }

  const std::vector<std::uint64_t> superperfect_expected{2, 9, 165, 238};
  std::vector<std::uint64_t> superperfect;
  for (std::uint64_t n = 1; n <= 238; ++n) {
    if (sigma_unitary(sigma_unitary(n)) == 2 * n) superperfect.push_back(n);
  }
  if (superperfect != superperfect_expected) {
    report.fail(superperfect, "unitary superperfect numbers up to 238 differ from {2, 9, 165, 238}");
  }
  return report;
}

}  // namespace busp
