#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "treexp/adversary.hpp"
#include "treexp/opt_oracle.hpp"

using namespace treexp;

namespace {

// Replays a recorded trace on a ground-truth tree; every move must match.
std::size_t replay_on(const Tree& tree, const Trace& trace, std::uint32_t agents, std::uint32_t budget) {
  KnownTreeSource src(tree);
  Exploration s(src, agents, budget);
  for (const auto& e : trace) {
    auto got = s.traverse(e.agent, e.port);
    CHECK(got.from == e.from);
    CHECK(got.to == e.to);
    CHECK(got.newly_explored == e.newly_explored);
  }
  return s.explored_count();
}

// Walks from the root down to depth `depth` along port 0 at the root, then port 1.
void descend(Exploration& s, AgentId a, Port root_port, std::uint32_t depth) {
  s.traverse(a, root_port);
  for (std::uint32_t i = 1; i < depth; ++i) s.traverse(a, 1);
}

void ascend_to_root(Exploration& s, AgentId a) {
  while (s.agent(a).position != s.map().root()) s.traverse(a, 0);
}

}  // namespace

TEST_SUITE("star_adversary") {
  TEST_CASE("no strategy gets past half the optimum") {
    for (std::uint32_t k : {1u, 2u, 4u}) {
      for (std::uint32_t b : {2u, 4u, 8u}) {
        for (StrategyKind kind : kAllStrategies) {
          CAPTURE(k);
          CAPTURE(b);
          StarAdversary adv(k, b);
          Exploration s(adv, k, b);
          auto run = run_strategy(kind, s, 3);
          CHECK(run.explored_without_root <= k * b / 2);
          Tree full = adv.finalize();
          CHECK(full.size() == 1 + k * b / 2 + k * b);
          CHECK(full.degree(0) == k + k * b / 2);
          CHECK(replay_on(full, run.trace, k, b) == run.explored_with_root);
          if (full.size() <= 20 && k <= 4 && b <= 12) CHECK(opt_exact(Instance{full, k, b}) == k * b + 1);
        }
      }
    }
  }

  TEST_CASE("first root children become short rays") {
    StarAdversary adv(2, 4);
    Exploration s(adv, 3, 4);
    s.traverse(0, 0);
    CHECK(s.map().degree(1) == 1);
    CHECK(adv.short_assigned() == 1);
    s.traverse(0, 0);
    s.traverse(0, 1);
    s.traverse(0, 0);
    s.traverse(1, 2);
    s.traverse(1, 0);
    s.traverse(1, 3);
    CHECK(adv.short_assigned() == 4);
    CHECK(adv.long_assigned() == 0);
    s.traverse(2, 4);
    CHECK(adv.long_assigned() == 1);
    CHECK(s.map().degree(5) == 2);
  }

  TEST_CASE("parameters") {
    CHECK_THROWS_AS(StarAdversary(2, 3), std::invalid_argument);
    CHECK_THROWS_AS(StarAdversary(0, 4), std::invalid_argument);
  }
}

TEST_SUITE("lb_adversary") {
  TEST_CASE("parameter derivation") {
    CHECK(lb_delta(2, 1024) == 68);
    CHECK(lb_delta(4, 4096) == 190);
    LBParams p = lb_params(2, 1024, 260);
    CHECK(p.d2 == 382);
    CHECK(p.delta == 68);
    CHECK(p.agents() == 3);
    CHECK(lb_params(4, 4096, 1048).d2 == 1524);
    CHECK_THROWS_AS(lb_params(2, 256, 64), InfeasibleParams);
    CHECK_THROWS_AS(lb_params(1, 1024, 260), InfeasibleParams);
    try {
      lb_params(2, 256, 64);
    } catch (const InfeasibleParams& e) {
      CHECK(std::string(e.what()).find("d1 + delta < d2") != std::string::npos);
    }
    CHECK(lb_violations(LBParams{2, 1024, 260, 382, 68}).empty());
    CHECK(lb_violations(LBParams{2, 1023, 261, 381, 68}).size() >= 3);
  }

  TEST_CASE("skeleton and hub structure") {
    LowerBoundAdversary adv(lb_params(2, 1024, 260));
    Exploration s(adv, 3, 1024);
    CHECK(s.map().degree(0) == 2);
    descend(s, 0, 0, 259);
    CHECK(s.map().degree(s.agent(0).position) == 2);
    s.traverse(0, 1);
    const VertexId v1 = s.agent(0).position;
    CHECK(s.map().depth(v1) == 260);
    CHECK(adv.subtrees()[0].hub1 == v1);
    CHECK(s.map().degree(v1) == 1 + 68);
    CHECK(adv.subtrees()[0].cases == std::vector<LbCase>{LbCase::Case1});
    CHECK(adv.subtrees()[0].fresh == std::vector<AgentId>{0});
    CHECK(adv.subtrees()[0].budget == 2 + (1024 + 382) / 2 - 260 + 2 * 68);
  }

  TEST_CASE("second fresh agent after little work below the hub gives case 2a") {
    LowerBoundAdversary adv(lb_params(2, 1024, 260));
    Exploration s(adv, 3, 1024);
    descend(s, 0, 0, 262);
    descend(s, 1, 0, 260);
    const auto& sub = adv.subtrees()[0];
    CHECK(sub.cases == std::vector<LbCase>{LbCase::Case1, LbCase::Case2a});
    CHECK(sub.v1_passive);
    CHECK(sub.v2_passive);
    // Passive region: fresh children of the hub are leaves now.
    s.traverse(1, 5);
    CHECK(s.map().degree(s.agent(1).position) == 1);
  }

  TEST_CASE("agent entering a second subtree gives case 3") {
    LowerBoundAdversary adv(lb_params(2, 1024, 260));
    Exploration s(adv, 3, 1024);
    descend(s, 0, 0, 260);
    ascend_to_root(s, 0);
    descend(s, 0, 1, 260);
    const std::int64_t left = 1024 - 3 * 260;
    CHECK(adv.agents()[0].b_a == left);
    CHECK(adv.subtrees()[1].cases == std::vector<LbCase>{LbCase::Case3});
    CHECK(adv.subtrees()[1].second == std::vector<AgentId>{0});
    CHECK(adv.subtrees()[1].budget == 2 + left / 2 + 2);
    auto acc = account_lb_run(adv, s);
    CHECK(acc.b_a[0] == left);
    CHECK(acc.subtrees[1].second == std::vector<AgentId>{0});
    CHECK(acc.subtree_visits[0] == 2);
  }

  TEST_CASE("all strategies satisfy every check") {
    for (auto p : {lb_params(2, 1024, 260), lb_params(4, 4096, 1048)}) {
      for (StrategyKind kind : kAllStrategies) {
        CAPTURE(p.l);
        CAPTURE(to_string(kind));
        LowerBoundAdversary adv(p);
        Exploration s(adv, static_cast<std::uint32_t>(p.agents()), static_cast<std::uint32_t>(p.budget));
        auto run = run_strategy(kind, s, 1);
        auto rep = finalize_lb(adv, s);
        for (const auto* r : {&rep.lemma3, &rep.lemma4, &rep.bounds}) {
          for (const auto& line : r->lines) {
            CAPTURE(line.name);
            CAPTURE(line.detail);
            CHECK(line.pass);
          }
        }
        for (auto c : rep.partition.cls) CHECK(c != MClass::None);
        REQUIRE(rep.tree.has_value());
        CHECK(replay_on(*rep.tree, run.trace, static_cast<std::uint32_t>(p.agents()),
                        static_cast<std::uint32_t>(p.budget)) == run.explored_with_root);
        CHECK(rep.replay_explored >= opt_lb217(p.l, p.budget, p.d1, p.delta, rep.t));
        CHECK(rep.measured_ratio >= rep.guaranteed_ratio);
        CHECK(rep.guaranteed_ratio == finite_lb_ratio(p.l, p.budget, p.d1, p.d2, p.delta, rep.t));
        CHECK(rep.alg_without_root == static_cast<std::int64_t>(run.explored_without_root));

        // Fresh agents per subtree, recomputed from the finalized tree.
        std::vector<std::vector<AgentId>> first_branch(p.l);
        std::vector<int> visits(p.agents(), 0);
        std::vector<std::set<VertexId>> entered(p.agents());
        for (const auto& e : run.trace) {
          if (rep.tree->depth(e.to) != static_cast<std::uint32_t>(p.d1) || rep.tree->parent(e.to) != e.from) continue;
          VertexId top = e.to;
          while (rep.tree->depth(top) > 1) top = rep.tree->parent(top);
          if (!entered[e.agent].insert(top).second) continue;
          if (++visits[e.agent] == 1) {
            Port branch = 0;
            while (rep.tree->neighbor(0, branch) != top) ++branch;
            first_branch[branch].push_back(e.agent);
          }
        }
        for (std::int64_t i = 0; i < p.l; ++i) CHECK(adv.subtrees()[i].fresh == first_branch[i]);

        std::string text = rep.serialize(adv);
        CHECK(text.find("check fail") == std::string::npos);
        CHECK(text.find("t " + std::to_string(rep.t)) != std::string::npos);
      }
    }
  }

  TEST_CASE("finalize needs a subtree with at most one fresh agent") {
    LowerBoundAdversary adv(lb_params(2, 1024, 260));
    Exploration s(adv, 3, 1024);
    descend(s, 0, 0, 260);
    descend(s, 1, 0, 260);
    descend(s, 2, 1, 260);
    CHECK_NOTHROW(finalize_lb(adv, s));
  }
}
