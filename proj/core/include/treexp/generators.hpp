#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "treexp/tree.hpp"

namespace treexp {

/// Root with 2k paths: ports 0..k-1 lead to paths of length d, ports
/// k..2k-1 to paths of length B = 3(d-1). Requires k >= 2 and d >= 3.
Instance gen_tightness(std::uint32_t k, std::uint32_t d);

/// Completed star for the oracle: ports 0..kB/2-1 are rays of length 1,
/// the remaining k ports rays of length B. Requires B even.
Instance gen_star_static(std::uint32_t k, std::uint32_t budget);

/// Random recursive tree: vertex v attaches to a uniformly chosen earlier
/// vertex that still has room under `max_degree` (0 = unbounded). Ports are
/// shuffled, then normalized. Agents and budget are left at 1 and 0.
Tree gen_random(std::uint32_t n, std::uint32_t max_degree, std::uint64_t seed);

/// Calls `fn` on every tree given by a parent array with parent[v] < v,
/// for all sizes 1..max_n. Returns the number of trees visited.
std::size_t for_each_small_tree(std::uint32_t max_n, const std::function<void(const Tree&)>& fn);

/// Uniform integer in [0, bound) with rejection sampling, so streams are
/// identical across standard library implementations.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

}  // namespace treexp
