#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "treexp/instance_io.hpp"

using namespace treexp;

TEST_SUITE("tree") {
  TEST_CASE("path basics") {
    Tree t = testing::path(4);
    CHECK(t.size() == 4);
    CHECK(t.root() == 0);
    CHECK(t.degree(0) == 1);
    CHECK(t.degree(3) == 1);
    CHECK(t.depth(3) == 3);
    CHECK(t.max_depth() == 3);
    CHECK(t.subtree_size(1) == 3);
    CHECK(t.parent(2) == 1);
    CHECK(t.is_normalized());
  }

  TEST_CASE("single vertex") {
    Tree t = Tree::from_edges(1, 0, {});
    CHECK(t.size() == 1);
    CHECK(t.degree(0) == 0);
    CHECK(t.max_depth() == 0);
  }

  TEST_CASE("ports at non-root vertices lead to parent through 0 after normalization") {
    std::vector<PortEdge> edges{{0, 1, 0, 1}, {1, 2, 0, 0}, {0, 3, 1, 0}};
    // Vertex 1: port 1 -> 0 (parent), port 0 -> 2.
    Tree raw = Tree::from_edges(4, 0, edges);
    CHECK_FALSE(raw.is_normalized());
    Tree t = normalize_ports(raw);
    CHECK(t.is_normalized());
    CHECK(t.neighbor(1, 0) == 0);
    CHECK(t.neighbor(1, 1) == 2);
    CHECK(t.neighbor(0, 0) == 1);
    CHECK(t.neighbor(0, 1) == 3);
    CHECK(normalize_ports(t) == t);
  }

  TEST_CASE("validation rejects malformed edge sets") {
    using E = std::vector<PortEdge>;
    CHECK_THROWS_AS(Tree::from_edges(3, 0, E{{0, 1, 0, 0}}), TreeError);                  // too few edges
    CHECK_THROWS_AS(Tree::from_edges(3, 0, E{{0, 1, 0, 0}, {0, 1, 1, 1}}), TreeError);    // duplicate
    CHECK_THROWS_AS(Tree::from_edges(3, 0, E{{0, 1, 0, 0}, {0, 2, 0, 0}}), TreeError);    // port collision
    CHECK_THROWS_AS(Tree::from_edges(3, 0, E{{0, 1, 0, 0}, {0, 5, 1, 0}}), TreeError);    // id out of range
    CHECK_THROWS_AS(Tree::from_edges(3, 0, E{{0, 1, 0, 0}, {0, 2, 2, 0}}), TreeError);    // port gap
    CHECK_THROWS_AS(Tree::from_edges(4, 0, E{{0, 1, 0, 0}, {1, 2, 1, 0}, {2, 1, 1, 2}}), TreeError);
    CHECK_THROWS_AS(Tree::from_edges(2, 5, E{{0, 1, 0, 0}}), TreeError);  // root out of range
  }

  TEST_CASE("tree_from_parents assigns child ports in id order") {
    std::vector<VertexId> parent{kNoVertex, 0, 0, 1, 1, 1};
    Tree t = tree_from_parents(parent);
    CHECK(t.child_ports(0) == std::vector<Port>{0, 1});
    CHECK(t.neighbor(0, 1) == 2);
    CHECK(t.child_ports(1) == std::vector<Port>{1, 2, 3});
    CHECK(t.neighbor(1, 3) == 5);
    CHECK(t.parent_port(4) == 0);
  }

  TEST_CASE("edges are sorted and complete") {
    Tree t = testing::heap(7);
    auto edges = t.edges();
    REQUIRE(edges.size() == 6);
    for (std::size_t i = 1; i < edges.size(); ++i) {
      auto key = [](const PortEdge& e) { return std::pair(std::min(e.u, e.v), std::max(e.u, e.v)); };
      CHECK(key(edges[i - 1]) < key(edges[i]));
    }
    Tree again = Tree::from_edges(7, 0, edges);
    CHECK(again == t);
  }
}

TEST_SUITE("instance_io") {
  TEST_CASE("round trip") {
    Instance inst{testing::heap(6), 3, 7};
    std::string text = serialize_instance(inst);
    CHECK(text.rfind("TREE v1\n", 0) == 0);
    Instance back = parse_instance(text);
    CHECK(back == inst);
    CHECK(serialize_instance(back) == text);
  }

  TEST_CASE("comments, blank lines, and optional parameters") {
    Instance inst = parse_instance("# hello\nTREE v1\n\nn 3\nroot 0\nedge 0 1 0 0\nedge 1 2 1 0\n");
    CHECK(inst.tree.size() == 3);
    CHECK(inst.agents == 1);
    CHECK(inst.budget == 0);
  }

  TEST_CASE("parsing normalizes ports") {
    Instance inst = parse_instance("TREE v1\nn 3\nroot 0\nedge 0 1 0 1\nedge 1 2 0 0\nk 2\nB 4\n");
    CHECK(inst.tree.is_normalized());
    CHECK(inst.tree.neighbor(1, 1) == 2);
    CHECK(inst.agents == 2);
    CHECK(inst.budget == 4);
  }

  TEST_CASE("errors carry line numbers") {
    auto line_of = [](const std::string& text) -> std::size_t {
      try {
        parse_instance(text);
      } catch (const ParseError& e) {
        return e.line();
      }
      return 0;
    };
    CHECK(line_of("TREE v2\n") == 1);
    CHECK(line_of("TREE v1\nn x\n") == 2);
    CHECK(line_of("TREE v1\nn 2\nroot 0\nedge 0 1 0\n") == 4);
    CHECK(line_of("TREE v1\nn 2\nroot 0\nedge 0 7 0 0\n") == 4);
    CHECK(line_of("TREE v1\nn 2\nroot 0\nfoo\n") == 4);
    CHECK_THROWS_AS(parse_instance("TREE v1\nn 3\nroot 0\nedge 0 1 0 0\nedge 0 1 1 1\n"), TreeError);
    CHECK_THROWS_AS(parse_instance("TREE v1\nn 3\nroot 0\nedge 0 1 0 0\n"), TreeError);
  }

  TEST_CASE("missing file") { CHECK_THROWS_AS(read_instance_file("/nonexistent/instance.tree"), std::runtime_error); }
}
