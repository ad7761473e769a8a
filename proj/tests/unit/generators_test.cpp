#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "treexp/instance_io.hpp"

using namespace treexp;

TEST_SUITE("generators") {
  TEST_CASE("tightness shape") {
    Instance inst = gen_tightness(2, 3);
    CHECK(inst.tree.size() == 19);
    CHECK(inst.tree.edges().size() == 18);
    CHECK(inst.agents == 2);
    CHECK(inst.budget == 6);
    CHECK(inst.tree.degree(0) == 4);
    // Ports 0..k-1 lead to short paths, k..2k-1 to long ones.
    for (Port p = 0; p < 4; ++p) {
      VertexId v = inst.tree.neighbor(0, p);
      CHECK(inst.tree.subtree_size(v) == (p < 2 ? 3u : 6u));
    }
    Instance big = gen_tightness(3, 3);
    CHECK(big.tree.size() == 1 + 3 * 3 + 3 * 6);
    CHECK_THROWS_AS(gen_tightness(1, 3), std::invalid_argument);
    CHECK_THROWS_AS(gen_tightness(2, 2), std::invalid_argument);
  }

  TEST_CASE("static star shape") {
    Instance inst = gen_star_static(2, 4);
    CHECK(inst.tree.degree(0) == 6);
    CHECK(inst.tree.size() == 13);
    for (Port p = 0; p < 6; ++p) CHECK(inst.tree.subtree_size(inst.tree.neighbor(0, p)) == (p < 4 ? 1u : 4u));
    CHECK_THROWS_AS(gen_star_static(2, 3), std::invalid_argument);
  }

  TEST_CASE("random trees are valid, normalized and deterministic") {
    CHECK(gen_random(1, 0, 3).size() == 1);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      Tree t = gen_random(12, 0, seed);
      CHECK(t.size() == 12);
      CHECK(t.is_normalized());
      Tree again = Tree::from_edges(t.size(), t.root(), t.edges());
      CHECK(again == t);
    }
    CHECK(serialize_tree(gen_random(25, 3, 99)) == serialize_tree(gen_random(25, 3, 99)));
    CHECK(serialize_tree(gen_random(25, 3, 99)) != serialize_tree(gen_random(25, 3, 100)));
  }

  TEST_CASE("degree cap") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      Tree t = gen_random(40, 3, seed);
      for (VertexId v = 0; v < t.size(); ++v) CHECK(t.degree(v) <= 3);
    }
    Tree p = gen_random(10, 2, 1);
    for (VertexId v = 0; v < p.size(); ++v) CHECK(p.degree(v) <= 2);
    CHECK_THROWS_AS(gen_random(3, 1, 1), std::invalid_argument);
  }

  TEST_CASE("small tree enumeration") {
    std::set<std::string> distinct;
    std::size_t visited = 0;
    auto count = for_each_small_tree(7, [&](const Tree& t) {
      ++visited;
      distinct.insert(serialize_tree(t));
    });
    CHECK(count == 1 + 1 + 2 + 6 + 24 + 120 + 720);
    CHECK(visited == count);
    CHECK(distinct.size() == count);
    CHECK(for_each_small_tree(0, [](const Tree&) {}) == 0);
  }

  TEST_CASE("uniform_below stays in range and covers it") {
    std::mt19937_64 rng(1);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
      auto x = uniform_below(rng, 7);
      CHECK(x < 7);
      seen.insert(x);
    }
    CHECK(seen.size() == 7);
    CHECK_THROWS(uniform_below(rng, 0));
  }
}
