// Command-line front end: compute, search, lemmas, verify-table, named-sets.
//
// Exit status: 0 success / match, 1 verified mismatch or lemma failure,
// 2 usage or I/O error.

#include <atomic>
#include <charconv>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "busp/arith.hpp"
#include "busp/checkpoint.hpp"
#include "busp/lemmas.hpp"
#include "busp/report.hpp"
#include "busp/search.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted = true; }

// Decimal or 2^k.
std::uint64_t parse_bound(const std::string& text) {
  auto parse_decimal = [&](std::string_view digits) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) {
      throw UsageError("not a non-negative integer: '" + text + "'");
    }
    return v;
  };
  if (text.starts_with("2^")) {
    const std::uint64_t e = parse_decimal(std::string_view(text).substr(2));
    if (e > 63) throw UsageError("exponent too large in '" + text + "'");
    return std::uint64_t{1} << e;
  }
  return parse_decimal(text);
}

std::string format_factorization(const busp::Factorization& f) {
  if (f.is_one()) return "1";
  std::string out;
  for (const busp::PrimePower& pp : f) {
    if (!out.empty()) out += " * ";
    out += std::to_string(pp.prime);
    if (pp.exponent > 1) out += "^" + std::to_string(pp.exponent);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

unsigned default_workers() {
  if (const char* env = std::getenv("BUSP_WORKERS")) {
    const std::uint64_t w = parse_bound(env);
    if (w == 0 || w > 4096) throw UsageError("BUSP_WORKERS must be in [1, 4096]");
    return static_cast<unsigned>(w);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void print_report(const busp::LemmaReport& r) {
  std::cout << (r.passed ? "PASS " : "FAIL ") << busp::to_string(r.lemma_id) << " [" << r.domain_descriptor << "]\n";
  for (const std::string& note : r.notes) std::cout << "  note: " << note << "\n";
  std::size_t shown = 0;
  for (const busp::Counterexample& c : r.counterexamples) {
    if (++shown > 10) {
      std::cout << "  ... " << r.counterexamples.size() - 10 << " more counterexamples\n";
      break;
    }
    std::cout << "  counterexample (";
    for (std::size_t i = 0; i < c.input.size(); ++i) std::cout << (i ? ", " : "") << c.input[i];
    std::cout << "): " << c.reason << "\n";
  }
}

int cmd_compute(const std::string& n_text) {
  const std::uint64_t n = parse_bound(n_text);
  if (n == 0) throw UsageError("n must be >= 1");
  const busp::Factorization f = busp::factorize(n);
  const std::uint64_t s1 = busp::sigma_bu(f);
  const std::uint64_t s2 = busp::sigma_bu(s1);
  std::cout << "n = " << n << "\n"
            << "factorization = " << format_factorization(f) << "\n"
            << "sigma_bu(n) = " << s1 << "\n"
            << "sigma_unitary(n) = " << busp::sigma_unitary(f) << "\n"
            << "sigma(n) = " << busp::sigma_classic(f) << "\n"
            << "omega(n) = " << busp::omega(f) << "\n"
            << "sigma_bu(sigma_bu(n)) = " << s2 << "\n";
  if (s2 % n == 0) {
    std::cout << "n divides sigma_bu(sigma_bu(n)): yes, k = " << s2 / n << "\n";
  } else {
    std::cout << "n divides sigma_bu(sigma_bu(n)): no\n";
  }
  return kExitOk;
}

struct SearchArgs {
  std::string lo;
  std::string hi;
  std::string segment_size = std::to_string(busp::kDefaultSegmentSize);
  std::optional<unsigned> workers;
  std::string checkpoint;
  std::string resume;
  std::string out;
  std::string format = "csv";
  std::uint64_t stop_after = 0;
};

int cmd_search(const SearchArgs& args) {
  busp::SearchOptions options;
  options.lo = parse_bound(args.lo);
  options.hi = parse_bound(args.hi);
  if (options.lo < 1) throw UsageError("lo must be >= 1");
  if (options.lo > options.hi) throw UsageError("lo must not exceed hi");
  if (options.hi > busp::kMaxSearchBound) throw UsageError("hi must not exceed 2^40");
  options.segment_size = parse_bound(args.segment_size);
  if (options.segment_size == 0) throw UsageError("segment size must be positive");
  options.workers = args.workers ? *args.workers : default_workers();
  if (options.workers == 0) throw UsageError("worker count must be positive");
  if (!args.resume.empty() && !args.checkpoint.empty() && args.resume != args.checkpoint) {
    throw UsageError("--resume and --checkpoint name different files");
  }
  if (!args.resume.empty()) {
    if (!std::filesystem::exists(args.resume)) throw UsageError("no checkpoint to resume at " + args.resume);
    options.checkpoint_path = args.resume;
  } else if (!args.checkpoint.empty()) {
    options.checkpoint_path = args.checkpoint;
  }
  const busp::OutputFormat format = args.format == "json" ? busp::OutputFormat::Json : busp::OutputFormat::Csv;
  if (!args.out.empty() && std::filesystem::is_directory(args.out)) throw UsageError(args.out + " is a directory");
  if (args.stop_after > 0) options.stop_after_segments = args.stop_after;
  options.progress = &std::cerr;
  options.cancel = &g_interrupted;

  std::signal(SIGINT, on_sigint);
  const busp::SearchResult result = busp::run_search(options);
  std::signal(SIGINT, SIG_DFL);

  if (!result.completed) {
    std::cout << "stopped at watermark " << result.watermark << " of [" << result.lo << ", " << result.hi << "]";
    if (options.checkpoint_path) std::cout << "; resume with --checkpoint " << options.checkpoint_path->string();
    std::cout << "\n";
    return g_interrupted ? 130 : kExitOk;
  }

  const busp::TableSummary summary = busp::aggregate(result.records, result.lo, result.hi);
  if (!args.out.empty()) busp::emit(summary, result.records, format, args.out);

  std::cout << "interval [" << summary.lo << ", " << summary.hi << "]\n";
  for (const auto& [k, row] : summary.per_k) {
    std::cout << "k=" << k << " count=" << row.count << " members:";
    for (std::uint64_t n : row.members) std::cout << ' ' << n;
    std::cout << "\n";
  }
  std::cout << "odd members:";
  for (std::uint64_t n : busp::odd_members(summary)) std::cout << ' ' << n;
  std::cout << "\ntotal " << summary.total() << "\n";
  return kExitOk;
}

struct LemmaArgs {
  std::uint64_t parity_max = 1'000'000;
  std::uint64_t ratio_pmax = 97;
  std::uint32_t ratio_emax = 30;
  std::uint32_t ratio_mmax = 5;
  std::uint64_t bang_amax = 12;
  std::uint64_t bang_nmax = 18;
  std::uint64_t class_pmax = 200;
  std::uint32_t class_emax = 6;
  std::uint32_t pow2_emax = 40;
};

int cmd_lemmas(const LemmaArgs& a) {
  if (a.parity_max > busp::kParityMax) throw UsageError("--parity-max must not exceed 10^7");
  if (a.pow2_emax > 62) throw UsageError("--pow2-emax must not exceed 62");
  const busp::LemmaReport reports[] = {
      busp::check_parity(a.parity_max),
      busp::check_ratio_bounds(a.ratio_pmax, a.ratio_emax, a.ratio_mmax),
      busp::check_bang(a.bang_amax, a.bang_nmax),
      busp::check_classification(a.class_pmax, a.class_emax),
      busp::check_sbu_pow2_prime_power(a.pow2_emax),
      busp::check_case_constants(),
  };
  bool all = true;
  for (const auto& r : reports) {
    print_report(r);
    all = all && r.passed;
  }
  std::cout << (all ? "all lemma checks passed" : "lemma checks FAILED") << "\n";
  return all ? kExitOk : kExitMismatch;
}

int cmd_verify_table(const std::string& path) {
  const std::string text = read_file(path);
  const busp::TableSummary summary = busp::summary_from_json(text);
  const busp::Comparison comparison = busp::compare_to_reference(summary);
  std::cout << comparison.to_text() << comparison.to_json();
  return comparison.matched() ? kExitOk : kExitMismatch;
}

int cmd_named_sets() {
  const busp::LemmaReport r = busp::verify_named_sets();
  print_report(r);
  return r.passed ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biunitary divisor sums: evaluation, lemma checks and the (2,k)-perfect search"};
  app.require_subcommand(1);

  std::string compute_n;
  auto* compute = app.add_subcommand("compute", "Print factorization, sigma_bu, sigma*, sigma, omega and the k test");
  compute->add_option("n", compute_n, "Positive integer (decimal or 2^k)")->required();

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "Find every n in [lo, hi] dividing sigma_bu(sigma_bu(n))");
  search->add_option("lo", sa.lo, "Lower bound (decimal or 2^k)")->required();
  search->add_option("hi", sa.hi, "Upper bound, at most 2^40")->required();
  search->add_option("--segment-size", sa.segment_size, "Integers per sieve segment")->capture_default_str();
  search->add_option("--workers", sa.workers, "Worker threads (default: $BUSP_WORKERS or hardware threads)");
  search->add_option("--checkpoint", sa.checkpoint, "Checkpoint file, resumed from when present");
  search->add_option("--resume", sa.resume, "Resume from an existing checkpoint file");
  search->add_option("--out", sa.out, "Write records (csv) or the summary (json) here");
  search->add_option("--format", sa.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  search->add_option("--stop-after", sa.stop_after, "Stop after this many segments (0 = run to the end)");

  LemmaArgs la;
  auto* lemmas = app.add_subcommand("lemmas", "Run the lemma verifiers");
  lemmas->add_option("--parity-max", la.parity_max, "Parity check covers 1..N")->capture_default_str();
  lemmas->add_option("--ratio-pmax", la.ratio_pmax, "Ratio bounds: largest prime")->capture_default_str();
  lemmas->add_option("--ratio-emax", la.ratio_emax, "Ratio bounds: largest exponent")->capture_default_str();
  lemmas->add_option("--ratio-mmax", la.ratio_mmax, "Ratio bounds: largest m")->capture_default_str();
  lemmas->add_option("--bang-amax", la.bang_amax, "Primitive primes: largest base a")->capture_default_str();
  lemmas->add_option("--bang-nmax", la.bang_nmax, "Primitive primes: largest exponent n")->capture_default_str();
  lemmas->add_option("--class-pmax", la.class_pmax, "2^a q^b classification: largest odd prime")->capture_default_str();
  lemmas->add_option("--class-emax", la.class_emax, "2^a q^b classification: largest exponent")->capture_default_str();
  lemmas->add_option("--pow2-emax", la.pow2_emax, "sigma_bu(2^e) prime-power check: largest e")->capture_default_str();

  std::string table_path;
  auto* verify = app.add_subcommand("verify-table", "Compare a JSON summary against the reference table");
  verify->add_option("summary", table_path, "Summary JSON written by search --format json")->required();

  auto* named = app.add_subcommand("named-sets", "Check the known biunitary perfect and unitary superperfect numbers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*compute) return cmd_compute(compute_n);
    if (*search) return cmd_search(sa);
    if (*lemmas) return cmd_lemmas(la);
    if (*verify) return cmd_verify_table(table_path);
    if (*named) return cmd_named_sets();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const busp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const busp::CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const busp::ComparisonError& e) {
    std::cerr << "comparison refused: " << e.what() << "\n";
    return kExitUsage;
  } catch (const busp::OverflowError& e) {
    std::cerr << "overflow: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
