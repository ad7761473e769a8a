#include "treexp/generators.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace treexp {
namespace {

// Appends a path of `length` vertices hanging from `from`.
void add_path(std::vector<VertexId>& parent, VertexId from, std::uint32_t length) {
  VertexId prev = from;
  for (std::uint32_t i = 0; i < length; ++i) {
    parent.push_back(prev);
    prev = static_cast<VertexId>(parent.size() - 1);
  }
}

}  // namespace

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("empty range");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

Instance gen_tightness(std::uint32_t k, std::uint32_t d) {
  if (k < 2) throw std::invalid_argument("tightness family needs k >= 2");
  if (d < 3) throw std::invalid_argument("tightness family needs d >= 3");
  const std::uint32_t budget = 3 * (d - 1);
  std::vector<VertexId> parent{kNoVertex};
  for (std::uint32_t j = 0; j < 2 * k; ++j) add_path(parent, 0, j < k ? d : budget);
  return Instance{tree_from_parents(parent), k, budget};
}

Instance gen_star_static(std::uint32_t k, std::uint32_t budget) {
  if (budget % 2 != 0) throw std::invalid_argument("star family needs an even budget");
  if (k == 0) throw std::invalid_argument("star family needs k >= 1");
  std::vector<VertexId> parent{kNoVertex};
  for (std::uint32_t j = 0; j < k * budget / 2; ++j) add_path(parent, 0, 1);
  for (std::uint32_t j = 0; j < k; ++j) add_path(parent, 0, budget);
  return Instance{tree_from_parents(parent), k, budget};
}

Tree gen_random(std::uint32_t n, std::uint32_t max_degree, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("random tree needs n >= 1");
  if (n > 2 && max_degree == 1) throw std::invalid_argument("max_degree 1 admits at most 2 vertices");
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> degree(n, 0);
  std::vector<VertexId> open{0};
  std::vector<PortEdge> edges;
  for (VertexId v = 1; v < n; ++v) {
    auto slot = uniform_below(rng, open.size());
    VertexId p = open[slot];
    edges.push_back({p, v, degree[p]++, 0});
    degree[v] = 1;
    if (max_degree != 0 && degree[p] >= max_degree) {
      open[slot] = open.back();
      open.pop_back();
    }
    if (max_degree == 0 || degree[v] < max_degree) open.push_back(v);
  }
  // Shuffle the labels at every vertex.
  std::vector<std::vector<Port>> perm(n);
  for (VertexId v = 0; v < n; ++v) {
    perm[v].resize(degree[v]);
    for (Port i = 0; i < degree[v]; ++i) perm[v][i] = i;
    for (Port i = degree[v]; i > 1; --i) std::swap(perm[v][i - 1], perm[v][uniform_below(rng, i)]);
  }
  for (auto& e : edges) {
    e.port_u = perm[e.u][e.port_u];
    e.port_v = perm[e.v][e.port_v];
  }
  return normalize_ports(Tree::from_edges(n, 0, edges));
}

std::size_t for_each_small_tree(std::uint32_t max_n, const std::function<void(const Tree&)>& fn) {
  std::size_t count = 0;
  for (std::uint32_t n = 1; n <= max_n; ++n) {
    std::vector<VertexId> parent(n, 0);
    parent[0] = kNoVertex;
    while (true) {
      fn(tree_from_parents(parent));
      ++count;
      // Odometer with digit v ranging over 0..v-1.
      VertexId v = 1;
      while (v < n && ++parent[v] == v) parent[v++] = 0;
      if (v >= n) break;
    }
  }
  return count;
}

}  // namespace treexp
