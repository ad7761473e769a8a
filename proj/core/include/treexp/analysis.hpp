#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "treexp/strategies.hpp"
#include "treexp/tree.hpp"

namespace treexp {

/// Exact fraction in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __extension__ using Wide = __int128;
    auto l = static_cast<Wide>(a.num_) * b.den_;
    auto r = static_cast<Wide>(b.num_) * a.den_;
    return l < r ? std::strong_ordering::less : l > r ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

struct CoverageReport {
  /// Distinct directed edges of the canonical L-DFS sequence covered.
  std::uint64_t covered = 0;
  /// Maximal runs of consecutive sequence edges, per agent.
  std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> runs;
  /// Vertices of the smallest subtree holding the root and all subtree roots.
  std::uint64_t tr_size = 0;
  /// Sum over iterations of k_t * (B - d(r_t)).
  std::int64_t weighted_slack = 0;
};

/// Maps each agent's traversals onto the L-DFS sequence of `tree`: moves
/// of forward agents count as themselves, moves of backward agents as
/// their reversal. `tr_size` and `weighted_slack` come from the run's
/// subtree roots and iteration records.
CoverageReport coverage_count(const RunResult& run, const Tree& tree, std::uint32_t budget);

enum class CheckStatus { Pass, Fail, Skip, NotApplicable };
std::string_view to_string(CheckStatus s);

struct CheckResult {
  CheckStatus status = CheckStatus::NotApplicable;
  /// Left side minus right side of the integer inequality.
  std::int64_t slack = 0;
  std::string detail;
};

/// 3 * covered >= 2(|T^R| - 1) + 2 * sum k_t (B - d(r_t)); skipped when the
/// run explored everything.
CheckResult check_lemma1(const RunResult& run, const Tree& tree, std::uint32_t budget);

/// 3 |ALG| >= |T^R| + sum over dispatched agents of (B - d_i), root
/// included in |ALG|, together with 2(|ALG| - 1) >= covered.
CheckResult check_alg_lower_bound(const RunResult& run, const Tree& tree, std::uint32_t budget);

enum class Metric { WithRoot, WithoutRoot };
std::string_view to_string(Metric m);
Metric parse_metric(std::string_view s);

struct RatioReport {
  std::int64_t alg = 0;
  std::int64_t opt = 0;
  Metric metric = Metric::WithoutRoot;
  bool infinite = false;
  Rational ratio;
  std::string str() const { return infinite ? "inf" : ratio.str(); }
};

RatioReport make_ratio(std::int64_t alg, std::int64_t opt, Metric metric);

/// min over t in {0, 1} of (8 - 4b - 4bt) / (5 - 7b - 2t + 6tb) for b in
/// (3/13, 1/3). Throws std::domain_error outside the range or if the t-grid
/// guard finds the expression non-monotone in t.
double lb_ratio(double b1);

struct LbOptimum {
  double b1 = 0;
  double value = 0;
};
LbOptimum lb_optimum();

/// Guaranteed ratio of the finite adversarial construction for a fixed t.
Rational finite_lb_ratio(std::int64_t l, std::int64_t budget, std::int64_t d1, std::int64_t d2, std::int64_t delta,
                         std::int64_t t);
/// Minimum over t = 0..l-1.
Rational finite_lb_ratio_min(std::int64_t l, std::int64_t budget, std::int64_t d1, std::int64_t d2,
                             std::int64_t delta);

/// One line of `family,params,algo,seed,metric,alg,opt,ratio,lemma1,lemma3,lemma4`.
struct CsvRow {
  std::string family;
  std::string params;
  std::string algo;
  std::uint64_t seed = 0;
  Metric metric = Metric::WithoutRoot;
  std::string alg;
  std::string opt;
  std::string ratio;
  CheckStatus lemma1 = CheckStatus::NotApplicable;
  CheckStatus lemma3 = CheckStatus::NotApplicable;
  CheckStatus lemma4 = CheckStatus::NotApplicable;
};

inline constexpr const char* kCsvHeader = "family,params,algo,seed,metric,alg,opt,ratio,lemma1,lemma3,lemma4";
std::string format_csv_row(const CsvRow& row);

}  // namespace treexp
