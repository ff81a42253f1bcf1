#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "busp/arith.hpp"
#include "busp/report.hpp"
#include "busp/search.hpp"

using namespace busp;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// A summary that agrees with the reference on every count and on the printed
// and odd members; unprinted members are filled with distinct even stand-ins.
TableSummary synthetic_full_table() {
  const ReferenceTable& ref = reference_table();
  TableSummary s;
  s.lo = 1;
  s.hi = ref.hi;
  std::uint64_t filler = 2'000'000;
  for (const auto& [k, count] : ref.counts) {
    KRow& row = s.per_k[k];
    if (const auto it = ref.printed_members.find(k); it != ref.printed_members.end()) row.members = it->second;
    for (std::uint64_t n : ref.odd_members) {
      if (sigma_bu(sigma_bu(n)) == std::uint64_t{k} * n &&
          std::find(row.members.begin(), row.members.end(), n) == row.members.end()) {
        row.members.push_back(n);
      }
    }
    while (row.members.size() < count) row.members.push_back(filler += 2);
    std::sort(row.members.begin(), row.members.end());
    row.count = count;
  }
  return s;
}

}  // namespace

TEST_CASE("reference table is internally consistent") {
  const ReferenceTable& ref = reference_table();
  CHECK(ref.hi == (1u << 30));
  std::uint64_t sum = 0;
  for (const auto& [k, c] : ref.counts) sum += c;
  CHECK(sum == ref.total);
  CHECK(ref.total == 173);
  CHECK_FALSE(ref.counts.contains(19));
  for (const auto& [k, members] : ref.printed_members) {
    REQUIRE(ref.counts.contains(k));
    CHECK(members.size() <= ref.counts.at(k));
    for (std::uint64_t n : members) {
      CAPTURE(n);
      CHECK(sigma_bu(sigma_bu(n)) == std::uint64_t{k} * n);
    }
  }
  CHECK(ref.odd_members == std::vector<std::uint64_t>{1, 9, 15, 21, 1023, 8925, 15345});
}

TEST_CASE("a summary equal to the reference matches in full mode") {
  const Comparison c = compare_to_reference(synthetic_full_table());
  CHECK(c.mode == Comparison::Mode::Full);
  CHECK(c.matched());
  CHECK(c.to_text().find("MATCH") != std::string::npos);
  const auto j = nlohmann::json::parse(c.to_json());
  CHECK(j.at("matched").get<bool>());
  CHECK(j.at("mode") == "full");
}

TEST_CASE("a perturbed count is reported as a mismatch") {
  TableSummary s = synthetic_full_table();
  s.per_k[7].members.push_back(336'323'582);
  std::sort(s.per_k[7].members.begin(), s.per_k[7].members.end());
  s.per_k[7].count += 1;
  const Comparison c = compare_to_reference(s);
  CHECK_FALSE(c.matched());
  CHECK(c.mismatches() == 2);  // the k=7 count and the total
}

TEST_CASE("a missing odd member and a k=19 row are reported") {
  TableSummary s = synthetic_full_table();
  auto& four = s.per_k[4].members;
  four.erase(std::find(four.begin(), four.end(), 8925));
  four.push_back(4'000'000);
  std::sort(four.begin(), four.end());
  s.per_k[19] = KRow{1, {5'000'000}};
  const Comparison c = compare_to_reference(s);
  CHECK_FALSE(c.matched());
  std::vector<std::string> failed;
  for (const auto& check : c.checks) {
    if (!check.passed) failed.push_back(check.name);
  }
  CHECK(std::find(failed.begin(), failed.end(), "odd members") != failed.end());
  CHECK(std::find(failed.begin(), failed.end(), "member 8925 with k=4") != failed.end());
  CHECK(std::find(failed.begin(), failed.end(), "no members for k=19 or k>=21") != failed.end());
}

TEST_CASE("sub-intervals are compared in exemplar-only mode") {
  const auto records = scan_range(1, 1 << 16);
  const TableSummary s = aggregate(records, 1, 1 << 16);
  const Comparison c = compare_to_reference(s);
  CHECK(c.mode == Comparison::Mode::ExemplarOnly);
  CHECK(c.matched());
  for (const auto& check : c.checks) CHECK(check.name != "total");

  TableSummary beyond = s;
  beyond.hi = (1u << 30) + 1;
  CHECK_THROWS_AS(compare_to_reference(beyond), ComparisonError);
}

TEST_CASE("CSV round trip and format") {
  const std::vector<SearchRecord> records{{1, 1, 1, 1}, {2, 3, 4, 2}, {8, 15, 24, 3}};
  const std::string csv = records_to_csv(records);
  CHECK(csv == "n,s1,s2,k\n1,1,1,1\n2,3,4,2\n8,15,24,3\n");
  CHECK(records_from_csv(csv) == records);
  CHECK(records_to_csv({}) == "n,s1,s2,k\n");
  CHECK(records_from_csv("n,s1,s2,k\n").empty());
}

TEST_CASE("malformed CSV is rejected") {
  CHECK_THROWS_AS(records_from_csv(""), ParseError);
  CHECK_THROWS_AS(records_from_csv("n,k\n1,1\n"), ParseError);
  CHECK_THROWS_AS(records_from_csv("n,s1,s2,k\n1,1,1\n"), ParseError);
  CHECK_THROWS_AS(records_from_csv("n,s1,s2,k\n1,1,1,x\n"), ParseError);
  CHECK_THROWS_AS(records_from_csv("n,s1,s2,k\n1,1,1,1"), ParseError);
}

TEST_CASE("JSON summary round trip") {
  const auto records = scan_range(1, 5000);
  const TableSummary s = aggregate(records, 1, 5000);
  const std::string text = summary_to_json(s);
  CHECK(summary_from_json(text) == s);
  const auto j = nlohmann::json::parse(text);
  CHECK(j.at("generated_by").at("version") == std::string(library_version()));
  CHECK(j.at("total").get<std::uint64_t>() == s.total());
}

TEST_CASE("malformed JSON summaries are rejected") {
  CHECK_THROWS_AS(summary_from_json("{"), ParseError);
  CHECK_THROWS_AS(summary_from_json(R"({"interval":{"lo":1,"hi":10},"per_k":[]})"), ParseError);
  CHECK_THROWS_AS(summary_from_json(R"({"interval":{"lo":1,"hi":10},"per_k":[{"k":1,"count":1,"members":[1]}],"total":2})"),
                  ParseError);
  CHECK_THROWS_AS(
      summary_from_json(
          R"({"interval":{"lo":1,"hi":10},"per_k":[{"k":1,"count":1,"members":[1]},{"k":1,"count":0,"members":[]}],"total":1})"),
      ParseError);
}

TEST_CASE("aggregate rejects records outside the interval") {
  const std::vector<SearchRecord> records{{20, 0, 0, 1}};
  CHECK_THROWS_AS(aggregate(records, 1, 10), std::invalid_argument);
}

TEST_CASE("emit writes complete files") {
  const auto dir = std::filesystem::temp_directory_path() / "busp_report_test";
  std::filesystem::create_directories(dir);
  const auto records = scan_range(1, 100);
  const TableSummary s = aggregate(records, 1, 100);
  emit(s, records, OutputFormat::Csv, dir / "out.csv");
  emit(s, records, OutputFormat::Json, dir / "out.json");
  CHECK(slurp(dir / "out.csv") == records_to_csv(records));
  CHECK(summary_from_json(slurp(dir / "out.json")) == s);
  CHECK_FALSE(std::filesystem::exists(dir / "out.csv.tmp"));
  std::filesystem::remove_all(dir);
}
