#include <cmath>
#include <functional>

#include "cli.hpp"
#include "treexp/generators.hpp"
#include "treexp/opt_oracle.hpp"

namespace treexp::cli {
namespace {

struct Tally {
  std::ostream& out;
  std::string suite;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;

  void check(bool ok, const std::string& what) {
    ++cases;
    if (ok) return;
    ++failures;
    out << "FAIL " << suite << " " << what << "\n";
  }
};

std::string seed_tag(std::uint64_t seed, const Instance& inst) {
  return "seed=" + std::to_string(seed) + " n=" + std::to_string(inst.tree.size()) +
         " k=" + std::to_string(inst.agents) + " B=" + std::to_string(inst.budget);
}

void suite_oracle(Tally& t) {
  for_each_small_tree(7, [&](const Tree& tree) {
    for (std::uint32_t k = 1; k <= 2; ++k) {
      for (std::uint32_t b = 0; b <= 5; ++b) {
        Instance inst{tree, k, b};
        auto fast = opt_exact(inst);
        auto slow = opt_naive_walks(inst);
        t.check(fast == slow, "n=" + std::to_string(tree.size()) +
                                  " k=" + std::to_string(k) + " B=" + std::to_string(b) + " exact=" +
                                  std::to_string(fast) + " naive=" + std::to_string(slow));
      }
    }
  });
}

void suite_lemma1(Tally& t, std::uint64_t seed, std::uint64_t count) {
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t s = seed + i;
    Instance inst = suite_instance(s, 14, 3, 8);
    RunResult run = run_on_tree(StrategyKind::DivideExplore, inst, s);
    auto l1 = check_lemma1(run, inst.tree, inst.budget);
    t.check(l1.status != CheckStatus::Fail, seed_tag(s, inst) + " lemma1 " + l1.detail);
    auto lb = check_alg_lower_bound(run, inst.tree, inst.budget);
    t.check(lb.status != CheckStatus::Fail, seed_tag(s, inst) + " alg-bound " + lb.detail);
  }
}

void suite_ratio3(Tally& t, std::uint64_t seed, std::uint64_t count) {
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t s = seed + i;
    Instance inst = suite_instance(s, 14, 3, 8);
    RunResult run = run_on_tree(StrategyKind::DivideExplore, inst, s);
    auto opt = opt_exact(inst);
    t.check(opt <= 3 * run.explored_with_root, seed_tag(s, inst) + " opt=" + std::to_string(opt) +
                                                   " alg=" + std::to_string(run.explored_with_root));
  }
}

void suite_tightness(Tally& t) {
  for (std::uint32_t k = 2; k <= 6; ++k) {
    for (std::uint32_t d = 3; d <= 8; ++d) {
      Instance inst = gen_tightness(k, d);
      RunResult run = run_on_tree(StrategyKind::DivideExplore, inst, 0);
      const std::uint64_t expected = 5 * d - 6 + (k - 2) * d;
      const std::string tag = "k=" + std::to_string(k) + " d=" + std::to_string(d);
      t.check(run.explored_without_root == expected,
              tag + " alg=" + std::to_string(run.explored_without_root) + " expected=" + std::to_string(expected));
      auto l1 = check_lemma1(run, inst.tree, inst.budget);
      t.check(l1.status != CheckStatus::Fail, tag + " lemma1 " + l1.detail);
      if (inst.tree.size() <= OptLimits{}.max_n && k <= OptLimits{}.max_agents && inst.budget <= OptLimits{}.max_budget) {
        auto opt = opt_exact(inst);
        t.check(opt == opt_tightness(k, d) + 1, tag + " opt_exact=" + std::to_string(opt));
      }
    }
  }
}

std::vector<LBParams> desk_params() { return {lb_params(2, 1024, 260), lb_params(4, 4096, 1048)}; }

void suite_lb(Tally& t, std::uint64_t seed, bool lemma3) {
  for (const auto& p : desk_params()) {
    for (StrategyKind kind : kAllStrategies) {
      LbRun r = run_lb(kind, p, seed);
      const std::string tag = "l=" + std::to_string(p.l) + " B=" + std::to_string(p.budget) + " algo=" +
                              std::string(to_string(kind)) + " seed=" + std::to_string(seed);
      const auto& reports = lemma3 ? std::vector<const CheckReport*>{&r.report.lemma3}
                                   : std::vector<const CheckReport*>{&r.report.lemma4, &r.report.bounds};
      for (const auto* rep : reports) {
        for (const auto& line : rep->lines) t.check(line.pass, tag + " [" + line.name + "] " + line.detail);
      }
    }
  }
}

void suite_lbnum(Tally& t) {
  const double b_star = (19 - 3 * std::sqrt(17.0)) / 26;
  const double v_star = (5 + 3 * std::sqrt(17.0)) / 8;
  auto opt = lb_optimum();
  t.check(std::abs(opt.b1 - b_star) <= 1e-6, "b1=" + std::to_string(opt.b1));
  t.check(std::abs(opt.value - v_star) <= 1e-6, "value=" + std::to_string(opt.value));
  t.check(std::abs(opt.value - 2.171163) <= 1e-5, "value vs 2.171163");
  t.check(std::abs(lb_ratio(0.3) - 5.6 / 2.7) <= 1e-9, "lb_ratio(0.3)=" + std::to_string(lb_ratio(0.3)));
  t.check(finite_lb_ratio(2, 1024, 260, 382, 68, 0) == Rational(5488, 4688), "finite ratio at desk scale");
  double prev = 0;
  for (int i = 5; i <= 9; ++i) {
    const std::int64_t l = std::int64_t{1} << i;
    const std::int64_t b = std::int64_t{1} << (2 * i);
    const auto d1 = 2 * static_cast<std::int64_t>(std::llround(b_star * static_cast<double>(b) / 2));
    const double v = finite_lb_ratio_min(l, b, d1, (b - d1) / 2, lb_delta(l, b)).to_double();
    t.check(v > prev && v < v_star, "i=" + std::to_string(i) + " ratio=" + std::to_string(v));
    prev = v;
  }
}

}  // namespace

int cmd_verify(const Globals& g, const std::string& suite, std::uint64_t count, std::ostream& out) {
  Tally t{out, suite};
  if (suite == "oracle") {
    suite_oracle(t);
  } else if (suite == "lemma1") {
    suite_lemma1(t, g.seed, count ? count : 1000);
  } else if (suite == "ratio3") {
    suite_ratio3(t, g.seed, count ? count : 500);
  } else if (suite == "tightness") {
    suite_tightness(t);
  } else if (suite == "lemma3") {
    suite_lb(t, g.seed, true);
  } else if (suite == "lemma4") {
    suite_lb(t, g.seed, false);
  } else if (suite == "lbnum") {
    suite_lbnum(t);
  } else {
    throw UsageError("unknown suite '" + suite + "'");
  }
  out << "suite=" << suite << " seed=" << g.seed << " cases=" << t.cases << " failures=" << t.failures << "\n";
  return t.failures == 0 ? 0 : 1;
}

}  // namespace treexp::cli
