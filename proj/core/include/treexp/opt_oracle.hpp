#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include "treexp/tree.hpp"

namespace treexp {

class OracleGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Size guard for the subset search. Masks are 64 bits wide, so n is
/// hard-capped at 64 regardless of the configured limit.
struct OptLimits {
  std::uint32_t max_n = 20;
  std::uint32_t max_agents = 4;
  std::uint32_t max_budget = 12;
};

struct NaiveLimits {
  std::uint32_t max_n = 8;
  std::uint32_t max_agents = 2;
  std::uint32_t max_budget = 6;
};

/// Cheapest walk from the root visiting every vertex of `set`: it may end
/// anywhere, so only the path to the deepest vertex is walked once.
/// Throws std::invalid_argument if `set` misses the root or is disconnected.
std::uint64_t walk_cost_min(const Tree& tree, std::span<const VertexId> set);

/// Maximum number of distinct vertices (root included) that k agents with
/// budget B can visit together, via branch and bound over root-connected
/// vertex sets.
std::uint32_t opt_exact(const Instance& instance, const OptLimits& limits = {});

/// Same quantity by enumerating every walk of length at most B.
std::uint32_t opt_naive_walks(const Instance& instance, const NaiveLimits& limits = {});

// Closed-form optima, root excluded.
inline std::uint64_t opt_star(std::uint64_t k, std::uint64_t budget) { return k * budget; }
inline std::uint64_t opt_tightness(std::uint64_t k, std::uint64_t d) { return 3 * k * (d - 1); }
/// Certified lower bound on the finalized adversarial tree with t fully
/// explored subtrees.
std::int64_t opt_lb217(std::int64_t l, std::int64_t budget, std::int64_t d1, std::int64_t delta, std::int64_t t);

}  // namespace treexp
