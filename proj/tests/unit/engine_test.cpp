#include "doctest.h"
#include "helpers.hpp"

using namespace treexp;

TEST_SUITE("engine") {
  TEST_CASE("root is explored at start and its children are stubs") {
    Tree t = testing::star(3);
    KnownTreeSource src(t);
    Exploration s(src, 2, 5);
    CHECK(s.explored_count() == 1);
    CHECK(s.map().is_explored(0));
    CHECK(s.map().stub_count() == 3);
    CHECK(s.map().is_stub(2));
    CHECK(s.agent(1).energy == 5);
    CHECK(s.agent(1).position == 0);
  }

  TEST_CASE("traverse spends one unit and explores") {
    Tree t = testing::path(4);
    KnownTreeSource src(t);
    Exploration s(src, 1, 3);
    auto e = s.traverse(0, 0);
    CHECK(e.to == 1);
    CHECK(e.newly_explored);
    CHECK(e.energy_left == 2);
    CHECK(s.map().is_explored(1));
    CHECK(s.map().is_stub(2));
    auto back = s.traverse(0, 0);
    CHECK(back.to == 0);
    CHECK_FALSE(back.newly_explored);
    CHECK(s.trace().size() == 2);
    CHECK(s.trace()[1].step == 1);
  }

  TEST_CASE("errors") {
    Tree t = testing::path(3);
    KnownTreeSource src(t);
    CHECK_THROWS_AS(Exploration(src, 0, 3), EngineError);
    Exploration s(src, 1, 1);
    try {
      s.traverse(0, 4);
      FAIL("expected InvalidPort");
    } catch (const EngineError& e) {
      CHECK(e.code() == EngineError::Code::InvalidPort);
    }
    try {
      s.traverse(3, 0);
      FAIL("expected InvalidAgent");
    } catch (const EngineError& e) {
      CHECK(e.code() == EngineError::Code::InvalidAgent);
    }
    s.traverse(0, 0);
    try {
      s.traverse(0, 1);
      FAIL("expected OutOfEnergy");
    } catch (const EngineError& e) {
      CHECK(e.code() == EngineError::Code::OutOfEnergy);
    }
    s.finish();
    CHECK_THROWS_AS(s.traverse(0, 0), EngineError);
  }

  TEST_CASE("zero budget agents cannot move") {
    Tree t = testing::path(3);
    KnownTreeSource src(t);
    Exploration s(src, 2, 0);
    CHECK_THROWS_AS(s.traverse(0, 0), EngineError);
    CHECK(s.explored_count() == 1);
  }

  TEST_CASE("walk_to follows the tree path and stops when energy runs out") {
    Tree t = testing::heap(15);
    KnownTreeSource src(t);
    Exploration s(src, 2, 10);
    CHECK(s.walk_to(0, 1));
    CHECK(s.walk_to(0, 3));
    CHECK(s.walk_to(0, 8));
    CHECK(s.agent(0).position == 8);
    CHECK(s.map().distance(8, 2) == 4);
    CHECK(s.map().path(8, 0) == std::vector<VertexId>{8, 3, 1, 0});
    CHECK(s.map().is_descendant(8, 1));
    CHECK_FALSE(s.map().is_descendant(8, 2));
    CHECK(s.map().ancestor_at_depth(8, 1) == 1);
    CHECK(s.walk_to(0, 2));
    CHECK(s.agent(0).energy == 3);
    CHECK(s.walk_to(0, 6));
    CHECK(s.agent(0).energy == 2);
    CHECK_FALSE(s.walk_to(0, 4));
    CHECK(s.agent(0).energy == 0);
  }

  TEST_CASE("stub counts below a vertex track exploration") {
    Tree t = testing::heap(7);
    KnownTreeSource src(t);
    Exploration s(src, 1, 20);
    CHECK(s.map().stubs_below(0) == 2);
    s.traverse(0, 0);
    CHECK(s.map().stubs_below(1) == 2);
    CHECK(s.map().stubs_below(0) == 3);
    s.walk_to(0, 3);
    s.walk_to(0, 4);
    CHECK(s.map().stubs_below(1) == 0);
    CHECK_FALSE(s.is_fully_explored());
    CHECK_THROWS_AS(s.walk_to(0, 5), EngineError);
    s.walk_to(0, 2);
    s.walk_to(0, 5);
    s.walk_to(0, 6);
    CHECK(s.is_fully_explored());
    CHECK(s.explored_count() == 7);
  }

  TEST_CASE("trace text round trip") {
    Tree t = testing::heap(9);
    auto run = testing::run_known(StrategyKind::DivideExplore, Instance{t, 2, 6});
    std::string text = format_trace(run.trace);
    CHECK(parse_trace(text) == run.trace);
    CHECK(format_trace(parse_trace(text)) == text);
    CHECK_THROWS(parse_trace("1 2 3\n"));
  }

  TEST_CASE("source sees every move before the reveal it causes") {
    struct Recorder final : TopologySource {
      const Tree* tree;
      std::vector<std::string> log;
      explicit Recorder(const Tree& t) : tree(&t) {}
      VertexId root() const override { return 0; }
      std::vector<VertexId> reveal_root() override {
        auto p = tree->ports(0);
        return {p.begin(), p.end()};
      }
      void on_move(const Exploration&, const MoveEvent& m) override { log.push_back("move " + std::to_string(m.to)); }
      std::vector<VertexId> reveal(const Exploration&, const RevealRequest& r) override {
        log.push_back("reveal " + std::to_string(r.vertex));
        auto p = tree->ports(r.vertex);
        return {p.begin() + 1, p.end()};
      }
    };
    Tree t = testing::path(3);
    Recorder rec(t);
    Exploration s(rec, 1, 3);
    s.traverse(0, 0);
    s.traverse(0, 1);
    s.traverse(0, 0);
    CHECK(rec.log == std::vector<std::string>{"move 1", "reveal 1", "move 2", "reveal 2", "move 1"});
  }
}
