#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "treexp/adversary.hpp"
#include "treexp/analysis.hpp"
#include "treexp/strategies.hpp"
#include "treexp/tree.hpp"

namespace treexp::cli {

/// Bad flags, missing files, invalid instances: exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 1;
  std::string csv_path;
  std::string trace_path;
};

/// An instance plus the names it is reported under.
struct ResolvedInstance {
  Instance instance;
  std::string family;
  std::string params;
  std::optional<std::int64_t> opt_excl;  // closed form, when the family has one
};

/// Accepts a TREE v1 path or a builtin name: tight_k<k>_d<d>,
/// star_k<k>_B<B>, random_n<n>[_m<max degree>] (seeded by `seed`).
ResolvedInstance resolve_instance(const std::string& name, std::uint64_t seed);

/// Samples the random property-suite instance for `seed`: n <= max_n,
/// k <= max_k, 1 <= B <= max_b.
Instance suite_instance(std::uint64_t seed, std::uint32_t max_n, std::uint32_t max_k, std::uint32_t max_b);

/// Runs `kind` against a known tree.
RunResult run_on_tree(StrategyKind kind, const Instance& instance, std::uint64_t seed);

struct LbRun {
  std::unique_ptr<LowerBoundAdversary> adversary;
  RunResult run;
  FinalizedReport report;
};
LbRun run_lb(StrategyKind kind, const LBParams& params, std::uint64_t seed);

/// Nearest d1 to b1* B with d1 = B (mod 4), so d2 = (B - d1) / 2 is even.
std::int64_t default_d1(std::int64_t budget);

/// Comma-separated strategy names, or "all".
std::vector<StrategyKind> parse_algos(const std::string& list);

std::string params_string(const std::vector<std::pair<std::string, std::int64_t>>& kv);

void write_csv(const std::string& path, const std::vector<CsvRow>& rows, std::ostream& fallback);

int cmd_verify(const Globals& g, const std::string& suite, std::uint64_t count, std::ostream& out);

struct SweepOptions {
  std::string family;
  std::vector<std::uint32_t> k;
  std::vector<std::uint32_t> d;
  std::vector<std::uint32_t> budget;
  std::vector<std::uint32_t> l;
  std::vector<std::int64_t> d1;
  std::string algos = "dnd";
  std::string metric = "excl";
  std::uint64_t count = 0;
  std::uint32_t max_n = 14;
  unsigned jobs = 1;
};
int cmd_sweep(const Globals& g, const SweepOptions& opt, std::ostream& out);

}  // namespace treexp::cli
