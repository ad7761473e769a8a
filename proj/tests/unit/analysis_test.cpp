#include <cmath>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "treexp/analysis.hpp"
#include "treexp/opt_oracle.hpp"

using namespace treexp;

namespace {

// Distinct directed edges, reversed for backward agents.
std::uint64_t covered_by_hand(const RunResult& run) {
  std::set<std::pair<VertexId, VertexId>> edges;
  for (const auto& e : run.trace) {
    if (e.agent >= run.cover_modes.size()) continue;
    if (run.cover_modes[e.agent] == CoverMode::Forward) edges.emplace(e.from, e.to);
    if (run.cover_modes[e.agent] == CoverMode::Backward) edges.emplace(e.to, e.from);
  }
  return edges.size();
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("rational") {
    CHECK(Rational(6, -4) == Rational(-3, 2));
    CHECK(Rational(6, -4).den() == 2);
    CHECK(Rational(1, 3) < Rational(34, 100));
    CHECK(Rational(29700, 10294) == Rational(14850, 5147));
    CHECK(Rational(0, 5) == Rational(0));
    CHECK(Rational(3, 2).str() == "3/2");
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  }

  TEST_CASE("a single L-DFS agent covers exactly its budget") {
    Instance inst{testing::heap(63), 1, 17};
    auto run = testing::run_known(StrategyKind::Ldfs, inst);
    auto rep = coverage_count(run, inst.tree, inst.budget);
    CHECK(rep.covered == 17);
    REQUIRE(rep.runs[0].size() == 1);
    CHECK(rep.runs[0][0] == std::pair<std::uint64_t, std::uint64_t>{0, 17});
  }

  TEST_CASE("an L-DFS and an R-DFS agent cover twice the budget") {
    Instance inst{testing::heap(63), 2, 20};
    auto run = testing::run_known(StrategyKind::DivideExplore, inst);
    REQUIRE_FALSE(run.fully_explored);
    auto rep = coverage_count(run, inst.tree, inst.budget);
    CHECK(rep.covered == 40);
    CHECK(rep.runs[1].size() == 1);
    CHECK(rep.runs[1][0].second == 20);
    CHECK(rep.runs[1][0].first + 20 == 2 * 62);
  }

  TEST_CASE("idle agent and full traversal") {
    Instance idle{testing::heap(7), 1, 0};
    CHECK(coverage_count(testing::run_known(StrategyKind::Ldfs, idle), idle.tree, 0).covered == 0);
    // A complete L-DFS walk, including the final return to the root.
    Tree t = testing::heap(15);
    RunResult full;
    std::uint64_t step = 0;
    for (auto e : ldfs_sequence(t)) full.trace.push_back(MoveEvent{step++, 0, e.from, e.to, 0, 0, false, 0});
    full.cover_modes = {CoverMode::Forward};
    full.agents.resize(1);
    auto rep = coverage_count(full, t, 28);
    CHECK(rep.covered == 28);
    CHECK(rep.runs[0].size() == 1);
  }

  TEST_CASE("coverage rejects a trace from another tree") {
    Instance inst{testing::heap(31), 2, 8};
    auto run = testing::run_known(StrategyKind::DivideExplore, inst);
    CHECK_THROWS_AS(coverage_count(run, testing::path(3), 8), std::invalid_argument);
  }

  TEST_CASE("lemma 1 on the tightness family") {
    for (std::uint32_t k = 2; k <= 6; ++k) {
      for (std::uint32_t d = 3; d <= 8; ++d) {
        Instance inst = gen_tightness(k, d);
        auto run = testing::run_known(StrategyKind::DivideExplore, inst);
        auto res = check_lemma1(run, inst.tree, inst.budget);
        CHECK(res.status == CheckStatus::Pass);
        CHECK(res.slack >= 0);
        CHECK(check_alg_lower_bound(run, inst.tree, inst.budget).status == CheckStatus::Pass);
      }
    }
  }

  TEST_CASE("lemma 1 status for runs outside its hypothesis") {
    Instance small{testing::heap(7), 2, 20};
    auto full = testing::run_known(StrategyKind::DivideExplore, small);
    REQUIRE(full.fully_explored);
    CHECK(check_lemma1(full, small.tree, 20).status == CheckStatus::Skip);
    Instance inst{testing::heap(31), 2, 4};
    auto ldfs = testing::run_known(StrategyKind::Ldfs, inst);
    CHECK(check_lemma1(ldfs, inst.tree, 4).status == CheckStatus::NotApplicable);
  }

  TEST_CASE("coverage properties on random runs") {
    std::size_t checked = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      Instance inst = testing::random_instance(seed, 14, 3, 8);
      CAPTURE(seed);
      auto run = testing::run_known(StrategyKind::DivideExplore, inst);
      auto rep = coverage_count(run, inst.tree, inst.budget);
      CHECK(rep.covered == covered_by_hand(run));
      CHECK(rep.covered <= 2 * (inst.tree.size() - 1));
      CHECK(2 * (run.explored_with_root - 1) >= rep.covered);
      auto l1 = check_lemma1(run, inst.tree, inst.budget);
      if (run.fully_explored) {
        CHECK(l1.status == CheckStatus::Skip);
        continue;
      }
      ++checked;
      CHECK(l1.status == CheckStatus::Pass);
      // Integer form of the inequality, recomputed here.
      CHECK(3 * static_cast<std::int64_t>(rep.covered) >=
            2 * (static_cast<std::int64_t>(rep.tr_size) - 1) + 2 * rep.weighted_slack);
      CHECK(check_alg_lower_bound(run, inst.tree, inst.budget).status == CheckStatus::Pass);
    }
    CHECK(checked > 100);
  }

  TEST_CASE("ratios") {
    Instance inst = gen_tightness(3, 3);
    auto run = testing::run_known(StrategyKind::DivideExplore, inst);
    auto r = make_ratio(static_cast<std::int64_t>(run.explored_without_root), 18, Metric::WithoutRoot);
    CHECK(r.ratio == Rational(3, 2));
    CHECK(r.str() == "3/2");
    CHECK(make_ratio(7, 7, Metric::WithRoot).ratio == Rational(1));
    auto inf = make_ratio(0, 5, Metric::WithoutRoot);
    CHECK(inf.infinite);
    CHECK(inf.str() == "inf");
    CHECK(parse_metric("incl") == Metric::WithRoot);
    CHECK(to_string(Metric::WithoutRoot) == "excl");
    CHECK_THROWS_AS(parse_metric("both"), std::invalid_argument);
  }

  TEST_CASE("closed-form lower bound") {
    CHECK(lb_ratio(0.3) == doctest::Approx(5.6 / 2.7).epsilon(1e-12));
    CHECK(lb_ratio(0.25) == doctest::Approx(std::min((8 - 1.0) / (5 - 1.75), (8 - 2.0) / (3 - 1.75 + 1.5))));
    CHECK_THROWS_AS(lb_ratio(0.2), std::domain_error);
    CHECK_THROWS_AS(lb_ratio(1.0 / 3.0), std::domain_error);
    auto best = lb_optimum();
    CHECK(std::abs(best.b1 - (19 - 3 * std::sqrt(17.0)) / 26) < 1e-6);
    CHECK(std::abs(best.value - (5 + 3 * std::sqrt(17.0)) / 8) < 1e-6);
  }

  TEST_CASE("finite lower-bound ratio") {
    CHECK(finite_lb_ratio(2, 1024, 260, 382, 68, 0) == Rational(5488, 4688));
    // t = l - 1: the second denominator term vanishes.
    CHECK(finite_lb_ratio(2, 1024, 260, 382, 68, 1) ==
          Rational(6 * 1024 + 4 * (-260 - 68), 2 * (1024 + 382 + 12 * 68)));
    CHECK(finite_lb_ratio_min(2, 1024, 260, 382, 68) == finite_lb_ratio(2, 1024, 260, 382, 68, 1));
    CHECK_THROWS_AS(finite_lb_ratio(2, 1024, 260, 382, 68, 2), std::invalid_argument);
    CHECK_THROWS_AS(finite_lb_ratio(1, 1024, 260, 382, 68, 0), std::invalid_argument);
  }

  TEST_CASE("csv rows") {
    CsvRow row{"tightness", "k=3;d=3", "dnd", 1, Metric::WithoutRoot, "12", "18", "3/2",
               CheckStatus::Pass, CheckStatus::NotApplicable, CheckStatus::Skip};
    CHECK(format_csv_row(row) == "tightness,k=3;d=3,dnd,1,excl,12,18,3/2,pass,na,skip");
    CHECK(std::string(kCsvHeader) == "family,params,algo,seed,metric,alg,opt,ratio,lemma1,lemma3,lemma4");
  }
}
