#include "busp/report.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace busp {
namespace {

using nlohmann::json;

constexpr std::uint64_t kReferenceHi = std::uint64_t{1} << 30;

ReferenceTable build_reference() {
  ReferenceTable t;
  t.hi = kReferenceHi;
  t.total = 173;
  t.counts = {{1, 1},  {2, 2},   {3, 4},  {4, 8},  {5, 9},  {6, 13}, {7, 13}, {8, 18},  {9, 26}, {10, 18},
              {11, 8}, {12, 26}, {13, 8}, {14, 9}, {15, 3}, {16, 4}, {17, 1}, {18, 1},  {20, 1}};
  t.printed_members = {
      {1, {1}},
      {2, {2, 9}},
      {3, {8, 10, 21, 512}},
      {4, {15, 18, 324, 1023, 8925, 15345}},
      {5, {24, 30, 144, 288, 14976, 23040}},
      {6, {42, 60, 160, 270, 673254400}},
      {7, {240, 1200, 2400, 171196416}},
      {8, {648, 2808, 3570, 1062892908}},
      {9, {168, 960, 10368, 769600000}},
      {10, {480, 2856, 13824, 627720192}},
      {11, {321408, 1392768, 125706240}},
      {12, {4320, 10080, 779688000}},
      {13, {57120, 17821440, 942120960}},
      {14, {103680, 217728, 773760000}},
      {15, {1827840, 181059840, 754427520}},
      {16, {23591520, 594397440}},
      {17, {898128000}},
      {18, {374250240}},
      {20, {11975040}},
  };
  t.odd_members = {1, 9, 15, 21, 1023, 8925, 15345};
  return t;
}

std::string join(const std::vector<std::uint64_t>& values) {
  std::string out;
  for (std::uint64_t v : values) {
    if (!out.empty()) out += ", ";
    out += std::to_string(v);
  }
  return out;
}

void add_check(Comparison& c, std::string name, bool passed, std::string detail = {}) {
  c.checks.push_back(ComparisonCheck{std::move(name), passed, std::move(detail)});
}

// k = 19 and k >= 21 have no members below 2^30.
bool k_is_empty_in_reference(std::uint32_t k) { return k == 19 || k >= 21; }

std::uint64_t parse_u64(std::string_view field, std::size_t line) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
    throw ParseError("line " + std::to_string(line) + ": bad integer '" + std::string(field) + "'");
  }
  return value;
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::uint64_t TableSummary::total() const noexcept {
  std::uint64_t sum = 0;
  for (const auto& [k, row] : per_k) sum += row.count;
  return sum;
}

TableSummary aggregate(std::span<const SearchRecord> records, std::uint64_t lo, std::uint64_t hi) {
  TableSummary summary;
  summary.lo = lo;
  summary.hi = hi;
  for (const SearchRecord& r : records) {
    if (r.n < lo || r.n > hi) throw std::invalid_argument("record " + std::to_string(r.n) + " outside interval");
    KRow& row = summary.per_k[r.k];
    ++row.count;
    row.members.push_back(r.n);
  }
  for (auto& [k, row] : summary.per_k) std::sort(row.members.begin(), row.members.end());
  return summary;
}

std::vector<std::uint64_t> odd_members(const TableSummary& summary) {
  std::vector<std::uint64_t> odd;
  for (const auto& [k, row] : summary.per_k) {
    std::copy_if(row.members.begin(), row.members.end(), std::back_inserter(odd), [](std::uint64_t n) { return n & 1; });
  }
  std::sort(odd.begin(), odd.end());
  return odd;
}

const ReferenceTable& reference_table() {
  static const ReferenceTable table = build_reference();
  return table;
}

bool Comparison::matched() const noexcept { return mismatches() == 0; }

std::size_t Comparison::mismatches() const noexcept {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.passed; }));
}

std::string Comparison::to_text() const {
  std::ostringstream out;
  out << "comparison against the reference table, interval [" << lo << ", " << hi << "], mode "
      << (mode == Mode::Full ? "full" : "exemplar-only") << "\n";
  if (mode == Mode::ExemplarOnly) {
    out << "note: interval is not [1, 2^30]; only printed members inside it and count upper bounds are checked\n";
  }
  for (const ComparisonCheck& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    out << "\n";
  }
  out << (matched() ? "MATCH" : "MISMATCH") << " (" << mismatches() << " of " << checks.size() << " checks failed)\n";
  return out.str();
}

std::string Comparison::to_json() const {
  json j;
  j["interval"] = {{"lo", lo}, {"hi", hi}};
  j["mode"] = mode == Mode::Full ? "full" : "exemplar-only";
  j["matched"] = matched();
  j["mismatches"] = mismatches();
  json checks_json = json::array();
  for (const ComparisonCheck& c : checks) checks_json.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = std::move(checks_json);
  return j.dump() + "\n";
}

Comparison compare_to_reference(const TableSummary& summary) {
  const ReferenceTable& ref = reference_table();
  if (summary.lo < 1 || summary.hi > ref.hi || summary.lo > summary.hi) {
    throw ComparisonError("interval [" + std::to_string(summary.lo) + ", " + std::to_string(summary.hi) +
                          "] is not inside [1, 2^30]; refusing to compare");
  }
  Comparison c;
  c.lo = summary.lo;
  c.hi = summary.hi;
  c.mode = (summary.lo == 1 && summary.hi == ref.hi) ? Comparison::Mode::Full : Comparison::Mode::ExemplarOnly;
  const bool full = c.mode == Comparison::Mode::Full;

  for (const auto& [k, row] : summary.per_k) {
    const bool sorted = std::is_sorted(row.members.begin(), row.members.end()) &&
                        std::adjacent_find(row.members.begin(), row.members.end()) == row.members.end();
    const bool inside = row.members.empty() || (row.members.front() >= summary.lo && row.members.back() <= summary.hi);
    if (row.count != row.members.size() || !sorted || !inside) {
      add_check(c, "row k=" + std::to_string(k) + " consistent", false,
                "count " + std::to_string(row.count) + ", " + std::to_string(row.members.size()) + " members" +
                    (sorted ? "" : ", not ascending") + (inside ? "" : ", outside interval"));
    }
  }

  if (full) add_check(c, "total", summary.total() == ref.total,
                      std::to_string(summary.total()) + " (expected " + std::to_string(ref.total) + ")");

  std::set<std::uint32_t> ks;
  for (const auto& [k, n] : ref.counts) ks.insert(k);
  for (const auto& [k, row] : summary.per_k) ks.insert(k);
  for (std::uint32_t k : ks) {
    const auto it = summary.per_k.find(k);
    const std::uint64_t have = it == summary.per_k.end() ? 0 : it->second.count;
    const auto rit = ref.counts.find(k);
    const std::uint64_t want = rit == ref.counts.end() ? 0 : rit->second;
    const std::string detail = std::to_string(have) + (full ? " (expected " : " (reference ") + std::to_string(want) + ")";
    if (full) {
      add_check(c, "count k=" + std::to_string(k), have == want, detail);
    } else {
      add_check(c, "count k=" + std::to_string(k) + " within reference", have <= want, detail);
    }
  }

  std::vector<std::uint64_t> forbidden;
  for (const auto& [k, row] : summary.per_k) {
    if (k_is_empty_in_reference(k) && row.count > 0) forbidden.push_back(k);
  }
  add_check(c, "no members for k=19 or k>=21", forbidden.empty(),
            forbidden.empty() ? std::string{} : "populated k: " + join(forbidden));

  for (const auto& [k, members] : ref.printed_members) {
    for (std::uint64_t n : members) {
      if (n < summary.lo || n > summary.hi) continue;
      const auto it = summary.per_k.find(k);
      const bool present =
          it != summary.per_k.end() && std::binary_search(it->second.members.begin(), it->second.members.end(), n);
      add_check(c, "member " + std::to_string(n) + " with k=" + std::to_string(k), present);
    }
  }

  std::vector<std::uint64_t> expected_odd;
  std::copy_if(ref.odd_members.begin(), ref.odd_members.end(), std::back_inserter(expected_odd),
               [&](std::uint64_t n) { return n >= summary.lo && n <= summary.hi; });
  const std::vector<std::uint64_t> odd = odd_members(summary);
  add_check(c, "odd members", odd == expected_odd, "{" + join(odd) + "} (expected {" + join(expected_odd) + "})");
  return c;
}

std::string records_to_csv(std::span<const SearchRecord> records) {
  std::string out = "n,s1,s2,k\n";
  for (const SearchRecord& r : records) {
    out += std::to_string(r.n) + ',' + std::to_string(r.s1) + ',' + std::to_string(r.s2) + ',' + std::to_string(r.k) + '\n';
  }
  return out;
}

std::vector<SearchRecord> records_from_csv(std::string_view text) {
  std::vector<SearchRecord> records;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    if (eol == std::string_view::npos) throw ParseError("CSV line " + std::to_string(line_no + 1) + " not newline-terminated");
    const std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol + 1);
    ++line_no;
    if (line_no == 1) {
      if (line != "n,s1,s2,k") throw ParseError("CSV header must be n,s1,s2,k");
      continue;
    }
    std::uint64_t fields[4];
    std::string_view rest = line;
    for (int i = 0; i < 4; ++i) {
      const std::size_t comma = rest.find(',');
      if ((i < 3) == (comma == std::string_view::npos)) throw ParseError("CSV line " + std::to_string(line_no) + ": expected 4 fields");
      fields[i] = parse_u64(rest.substr(0, comma), line_no);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    if (fields[3] > std::numeric_limits<std::uint32_t>::max()) throw ParseError("k out of range");
    records.push_back(SearchRecord{fields[0], fields[1], fields[2], static_cast<std::uint32_t>(fields[3])});
  }
  if (line_no == 0) throw ParseError("CSV is empty");
  return records;
}

std::string summary_to_json(const TableSummary& summary) {
  json j;
  j["interval"] = {{"lo", summary.lo}, {"hi", summary.hi}};
  j["generated_by"] = {{"version", std::string(library_version())}};
  json rows = json::array();
  for (const auto& [k, row] : summary.per_k) rows.push_back({{"k", k}, {"count", row.count}, {"members", row.members}});
  j["per_k"] = std::move(rows);
  j["total"] = summary.total();
  return j.dump(2) + "\n";
}

TableSummary summary_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    TableSummary s;
    s.lo = j.at("interval").at("lo").get<std::uint64_t>();
    s.hi = j.at("interval").at("hi").get<std::uint64_t>();
    for (const json& row : j.at("per_k")) {
      const auto k = row.at("k").get<std::uint32_t>();
      if (s.per_k.contains(k)) throw ParseError("duplicate row for k=" + std::to_string(k));
      KRow r;
      r.count = row.at("count").get<std::uint64_t>();
      r.members = row.at("members").get<std::vector<std::uint64_t>>();
      s.per_k.emplace(k, std::move(r));
    }
    if (j.at("total").get<std::uint64_t>() != s.total()) throw ParseError("total does not equal the sum of counts");
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed summary JSON: ") + e.what());
  }
}

void emit(const TableSummary& summary, std::span<const SearchRecord> records, OutputFormat format,
          const std::filesystem::path& path) {
  write_atomically(path, format == OutputFormat::Csv ? records_to_csv(records) : summary_to_json(summary));
}

std::string_view library_version() noexcept { return BUSP_VERSION; }

}  // namespace busp
