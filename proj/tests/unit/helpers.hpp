#pragma once

#include <random>
#include <vector>

#include "treexp/generators.hpp"
#include "treexp/strategies.hpp"
#include "treexp/tree.hpp"

namespace treexp::testing {

inline Tree path(std::uint32_t n) {
  std::vector<VertexId> parent(n);
  parent[0] = kNoVertex;
  for (VertexId v = 1; v < n; ++v) parent[v] = v - 1;
  return tree_from_parents(parent);
}

inline Tree star(std::uint32_t leaves) {
  std::vector<VertexId> parent(leaves + 1, 0);
  parent[0] = kNoVertex;
  return tree_from_parents(parent);
}

// Complete binary tree with `n` vertices, heap order.
inline Tree heap(std::uint32_t n) {
  std::vector<VertexId> parent(n);
  parent[0] = kNoVertex;
  for (VertexId v = 1; v < n; ++v) parent[v] = (v - 1) / 2;
  return tree_from_parents(parent);
}

inline RunResult run_known(StrategyKind kind, const Instance& inst, std::uint64_t seed = 0) {
  KnownTreeSource source(inst.tree);
  Exploration state(source, inst.agents, inst.budget);
  return run_strategy(kind, state, seed);
}

// Random instance drawn the same way for every property test.
inline Instance random_instance(std::uint64_t seed, std::uint32_t max_n, std::uint32_t max_k, std::uint32_t max_b) {
  std::mt19937_64 rng(seed);
  auto n = static_cast<std::uint32_t>(1 + uniform_below(rng, max_n));
  auto k = static_cast<std::uint32_t>(1 + uniform_below(rng, max_k));
  auto b = static_cast<std::uint32_t>(1 + uniform_below(rng, max_b));
  auto deg = static_cast<std::uint32_t>(uniform_below(rng, 4));
  return Instance{gen_random(n, deg == 0 ? 0 : deg + 1, rng()), k, b};
}

}  // namespace treexp::testing
