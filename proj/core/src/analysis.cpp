#include "treexp/analysis.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace treexp {

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  if (g == 0) g = 1;
  num_ = num / g;
  den_ = den / g;
}

namespace {

struct SequenceIndex {
  std::vector<std::uint64_t> down;  // (parent(v), v)
  std::vector<std::uint64_t> up;    // (v, parent(v))

  explicit SequenceIndex(const Tree& tree) : down(tree.size(), 0), up(tree.size(), 0) {
    auto seq = ldfs_sequence(tree);
    for (std::uint64_t i = 0; i < seq.size(); ++i) {
      const auto& e = seq[i];
      if (tree.parent(e.to) == e.from && e.to != tree.root()) {
        down[e.to] = i;
      } else {
        up[e.from] = i;
      }
    }
  }

  std::uint64_t of(const Tree& tree, VertexId from, VertexId to) const {
    if (to != tree.root() && tree.parent(to) == from) return down[to];
    if (from != tree.root() && tree.parent(from) == to) return up[from];
    throw std::invalid_argument("trace move " + std::to_string(from) + "->" + std::to_string(to) +
                                " is not an edge of the tree");
  }
};

std::uint64_t root_tree_size(const RunResult& run, const Tree& tree) {
  std::vector<char> mark(tree.size(), 0);
  mark[tree.root()] = 1;
  std::uint64_t count = 1;
  for (VertexId r : run.subtree_roots) {
    for (VertexId v = r; !mark[v]; v = tree.parent(v)) {
      mark[v] = 1;
      ++count;
    }
  }
  return count;
}

}  // namespace

CoverageReport coverage_count(const RunResult& run, const Tree& tree, std::uint32_t budget) {
  for (const auto& e : run.trace) {
    if (e.from >= tree.size() || e.to >= tree.size()) {
      throw std::invalid_argument("trace references vertex outside the tree");
    }
  }
  CoverageReport report;
  SequenceIndex index(tree);
  std::vector<char> covered(tree.size() > 0 ? 2 * (tree.size() - 1) : 0, 0);
  const std::size_t agents = run.agents.size();
  report.runs.resize(agents);
  std::vector<std::int64_t> last(agents, -1);

  for (const auto& e : run.trace) {
    CoverMode mode = e.agent < run.cover_modes.size() ? run.cover_modes[e.agent] : CoverMode::None;
    if (mode == CoverMode::None) continue;
    const bool forward = mode == CoverMode::Forward;
    std::uint64_t i = forward ? index.of(tree, e.from, e.to) : index.of(tree, e.to, e.from);
    if (!covered[i]) {
      covered[i] = 1;
      ++report.covered;
    }
    auto& runs = report.runs[e.agent];
    auto expected = last[e.agent] + (forward ? 1 : -1);
    if (!runs.empty() && static_cast<std::int64_t>(i) == expected) {
      ++runs.back().second;
      if (!forward) runs.back().first = i;
    } else {
      runs.push_back({i, 1});
    }
    last[e.agent] = static_cast<std::int64_t>(i);
  }

  report.tr_size = root_tree_size(run, tree);
  for (const auto& rec : run.iterations) {
    report.weighted_slack +=
        static_cast<std::int64_t>(rec.agents_used) * (static_cast<std::int64_t>(budget) - rec.root_depth);
  }
  return report;
}

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skip: return "skip";
    case CheckStatus::NotApplicable: return "na";
  }
  return "?";
}

CheckResult check_lemma1(const RunResult& run, const Tree& tree, std::uint32_t budget) {
  if (run.iterations.empty()) return {CheckStatus::NotApplicable, 0, "no iteration records"};
  if (run.fully_explored) return {CheckStatus::Skip, 0, "tree fully explored"};
  auto rep = coverage_count(run, tree, budget);
  std::int64_t lhs = 3 * static_cast<std::int64_t>(rep.covered);
  std::int64_t rhs = 2 * (static_cast<std::int64_t>(rep.tr_size) - 1) + 2 * rep.weighted_slack;
  CheckResult out{lhs >= rhs ? CheckStatus::Pass : CheckStatus::Fail, lhs - rhs, {}};
  out.detail = "covered=" + std::to_string(rep.covered) + " |T^R|=" + std::to_string(rep.tr_size) +
               " sum k(B-d)=" + std::to_string(rep.weighted_slack);
  return out;
}

CheckResult check_alg_lower_bound(const RunResult& run, const Tree& tree, std::uint32_t budget) {
  if (run.iterations.empty()) return {CheckStatus::NotApplicable, 0, "no iteration records"};
  if (run.fully_explored) return {CheckStatus::Skip, 0, "tree fully explored"};
  auto rep = coverage_count(run, tree, budget);
  const auto alg = static_cast<std::int64_t>(run.explored_with_root);
  std::int64_t dispatched = 0;
  for (const auto& rec : run.iterations) {
    dispatched += static_cast<std::int64_t>(rec.agents.size()) * (static_cast<std::int64_t>(budget) - rec.root_depth);
  }
  std::int64_t slack1 = 3 * alg - (static_cast<std::int64_t>(rep.tr_size) + dispatched);
  std::int64_t slack2 = 2 * (alg - 1) - static_cast<std::int64_t>(rep.covered);
  CheckResult out{slack1 >= 0 && slack2 >= 0 ? CheckStatus::Pass : CheckStatus::Fail, std::min(slack1, slack2), {}};
  out.detail = "alg=" + std::to_string(alg) + " |T^R|=" + std::to_string(rep.tr_size) +
               " sum(B-d)=" + std::to_string(dispatched) + " covered=" + std::to_string(rep.covered);
  return out;
}

std::string_view to_string(Metric m) { return m == Metric::WithRoot ? "incl" : "excl"; }

Metric parse_metric(std::string_view s) {
  if (s == "incl") return Metric::WithRoot;
  if (s == "excl") return Metric::WithoutRoot;
  throw std::invalid_argument("unknown metric '" + std::string(s) + "' (expected incl or excl)");
}

RatioReport make_ratio(std::int64_t alg, std::int64_t opt, Metric metric) {
  RatioReport r;
  r.alg = alg;
  r.opt = opt;
  r.metric = metric;
  if (alg <= 0) {
    r.infinite = true;
  } else {
    r.ratio = Rational(opt, alg);
  }
  return r;
}

namespace {

double lb_expr(double b, double t) { return (8 - 4 * b - 4 * b * t) / (5 - 7 * b - 2 * t + 6 * t * b); }

}  // namespace

double lb_ratio(double b1) {
  if (!(b1 > 3.0 / 13.0 && b1 < 1.0 / 3.0)) throw std::domain_error("b1 must lie in (3/13, 1/3)");
  constexpr int kGrid = 10000;
  int sign = 0;
  double prev = lb_expr(b1, 0);
  for (int i = 1; i <= kGrid; ++i) {
    double cur = lb_expr(b1, static_cast<double>(i) / kGrid);
    double diff = cur - prev;
    int s = diff > 1e-15 ? 1 : diff < -1e-15 ? -1 : 0;
    if (s != 0) {
      if (sign != 0 && s != sign) throw std::domain_error("ratio is not monotone in t");
      sign = s;
    }
    prev = cur;
  }
  return std::min(lb_expr(b1, 0), lb_expr(b1, 1));
}

LbOptimum lb_optimum() {
  double lo = 3.0 / 13.0;
  double hi = 1.0 / 3.0;
  const double eps = 1e-12;
  lo += eps;
  hi -= eps;
  while (hi - lo > 1e-11) {
    double m1 = lo + (hi - lo) / 3;
    double m2 = hi - (hi - lo) / 3;
    if (lb_ratio(m1) < lb_ratio(m2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  double b = (lo + hi) / 2;
  return {b, lb_ratio(b)};
}

Rational finite_lb_ratio(std::int64_t l, std::int64_t budget, std::int64_t d1, std::int64_t d2, std::int64_t delta,
                         std::int64_t t) {
  if (l < 2 || t < 0 || t >= l) throw std::invalid_argument("need l >= 2 and 0 <= t < l");
  std::int64_t num = (4 * l - 2) * budget + (2 * l - 2 + 2 * t) * (-d1 - delta);
  std::int64_t den = l * (budget + d2 + 12 * delta) + (l - 1 - t) * (budget - 3 * d1);
  if (num < 0 || den <= 0) throw std::invalid_argument("parameters give a non-positive ratio");
  return Rational(num, den);
}

Rational finite_lb_ratio_min(std::int64_t l, std::int64_t budget, std::int64_t d1, std::int64_t d2,
                             std::int64_t delta) {
  Rational best = finite_lb_ratio(l, budget, d1, d2, delta, 0);
  for (std::int64_t t = 1; t < l; ++t) best = std::min(best, finite_lb_ratio(l, budget, d1, d2, delta, t));
  return best;
}

std::string format_csv_row(const CsvRow& row) {
  std::string out;
  out += row.family;
  out += ',';
  out += row.params;
  out += ',';
  out += row.algo;
  out += ',';
  out += std::to_string(row.seed);
  out += ',';
  out += to_string(row.metric);
  out += ',';
  out += row.alg;
  out += ',';
  out += row.opt;
  out += ',';
  out += row.ratio;
  out += ',';
  out += to_string(row.lemma1);
  out += ',';
  out += to_string(row.lemma3);
  out += ',';
  out += to_string(row.lemma4);
  return out;
}

}  // namespace treexp
