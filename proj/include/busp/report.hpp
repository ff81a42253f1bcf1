#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "busp/record.hpp"

namespace busp {

struct KRow {
  std::uint64_t count = 0;
  std::vector<std::uint64_t> members;  // ascending

  friend bool operator==(const KRow&, const KRow&) = default;
};

// Hits of one searched interval grouped by multiplier k.
struct TableSummary {
  std::uint64_t lo = 1;
  std::uint64_t hi = 0;
  std::map<std::uint32_t, KRow> per_k;

  std::uint64_t total() const noexcept;

  friend bool operator==(const TableSummary&, const TableSummary&) = default;
};

// Throws std::invalid_argument when a record lies outside [lo, hi].
TableSummary aggregate(std::span<const SearchRecord> records, std::uint64_t lo, std::uint64_t hi);

// Odd n across all rows, ascending.
std::vector<std::uint64_t> odd_members(const TableSummary& summary);

// The published table of n <= 2^30 with sigma_bu(sigma_bu(n)) = k n.
struct ReferenceTable {
  std::uint64_t hi = 0;
  std::uint64_t total = 0;
  std::map<std::uint32_t, std::uint64_t> counts;
  // Only the members that are printed explicitly; the rest are known by count.
  std::map<std::uint32_t, std::vector<std::uint64_t>> printed_members;
  std::vector<std::uint64_t> odd_members;
};

const ReferenceTable& reference_table();

struct ComparisonCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Comparison {
  enum class Mode { Full, ExemplarOnly };

  Mode mode = Mode::Full;
  std::uint64_t lo = 1;
  std::uint64_t hi = 0;
  std::vector<ComparisonCheck> checks;

  bool matched() const noexcept;
  std::size_t mismatches() const noexcept;
  std::string to_text() const;
  std::string to_json() const;
};

class ComparisonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// [1, 2^30] gets the full comparison (every count, the total, printed members,
// empty k = 19 and k >= 21, the odd members). Sub-intervals of [1, 2^30] get
// exemplar-only mode. Anything reaching past 2^30 throws ComparisonError.
Comparison compare_to_reference(const TableSummary& summary);

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json };

// "n,s1,s2,k" header then one row per record.
std::string records_to_csv(std::span<const SearchRecord> records);
std::vector<SearchRecord> records_from_csv(std::string_view text);

// {"interval":{"lo","hi"},"generated_by":{"version"},"per_k":[{"k","count","members"}],"total"}
std::string summary_to_json(const TableSummary& summary);
TableSummary summary_from_json(std::string_view text);

// Writes atomically (temporary file + rename). CSV renders the records, JSON
// the summary.
void emit(const TableSummary& summary, std::span<const SearchRecord> records, OutputFormat format,
          const std::filesystem::path& path);

std::string_view library_version() noexcept;

}  // namespace busp
