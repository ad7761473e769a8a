#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treexp/engine.hpp"
#include "treexp/tree.hpp"

namespace treexp {

enum class Direction { Left, Right };

struct DirectedEdge {
  VertexId from = 0;
  VertexId to = 0;
  friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

using DfsSequence = std::vector<DirectedEdge>;

/// Directed edges of a full depth-first traversal from the root, taking
/// the smallest (Left) or largest (Right) child label first. At the root
/// every port leads to a child, so label 0 is a candidate there.
DfsSequence dfs_sequence(const Tree& tree, Direction dir);
inline DfsSequence ldfs_sequence(const Tree& tree) { return dfs_sequence(tree, Direction::Left); }
inline DfsSequence rdfs_sequence(const Tree& tree) { return dfs_sequence(tree, Direction::Right); }

// ---------------------------------------------------------------------------
// Subtrees of the shared map

/// A rooted subtree of the known map. Everything below `root` belongs to it,
/// except that at `root` itself only `root_ports` are visible when the
/// subtree was produced by a split. Vertices revealed later inherit the
/// side of the branch they hang from.
struct Subtree {
  VertexId root = 0;
  std::optional<std::vector<Port>> root_ports;
  std::uint32_t created = 0;
};

class NoUnexploredError : public std::runtime_error {
 public:
  NoUnexploredError() : std::runtime_error("subtree has no unexplored vertex") {}
};

std::vector<Port> visible_child_ports(const KnownMap& map, const Subtree& s, VertexId v);
bool subtree_contains(const KnownMap& map, const Subtree& s, VertexId v);
std::uint64_t stubs_in(const KnownMap& map, const Subtree& s);

/// First stub met by a virtual L-DFS (R-DFS) of the known part of `s`.
VertexId leftmost_unexplored(const KnownMap& map, const Subtree& s);
VertexId rightmost_unexplored(const KnownMap& map, const Subtree& s);

/// Descends the root of `s` while it has exactly one child leading to a stub
/// and no stub child. The descended subtree is the full T(root).
Subtree move_root_down(const KnownMap& map, Subtree s);

/// Splits `s` at the child of its root leading to `right`: first keeps every
/// other branch, second keeps only that branch. Both stay rooted at the root.
std::pair<Subtree, Subtree> split_subtree(const KnownMap& map, const Subtree& s, VertexId left, VertexId right);

/// The evolving collection of edge-disjoint subtrees. Fully explored
/// subtrees are retained but never selected.
class SubtreeSet {
 public:
  explicit SubtreeSet(VertexId root);

  std::span<const Subtree> items() const { return items_; }
  void move_roots_down(const KnownMap& map);
  /// Subtree with a stub minimizing root depth; ties go to the lowest
  /// creation index. nullopt when no subtree has a stub.
  std::optional<std::size_t> highest_with_stub(const KnownMap& map) const;
  /// Replaces item `index` by the two halves of a split. Returns their indices.
  std::pair<std::size_t, std::size_t> split(const KnownMap& map, std::size_t index, VertexId left, VertexId right);
  const Subtree& at(std::size_t i) const { return items_.at(i); }

 private:
  std::vector<Subtree> items_;
  std::uint32_t next_created_ = 1;
};

// ---------------------------------------------------------------------------
// Agent programs

/// Moves on a shortest path to `start`, then repeatedly: if nothing below
/// the current vertex (within `s`) is unexplored, step toward the root of
/// `s`; otherwise take the child edge with the smallest (largest) label
/// leading to an unexplored vertex. Stops on empty energy, when `s` is fully
/// explored, or at the root of `s` with nothing unexplored below.
void run_dfs(Exploration& state, AgentId agent, const Subtree& s, VertexId start, Direction dir);
inline void run_ldfs(Exploration& state, AgentId agent, const Subtree& s, VertexId start) {
  run_dfs(state, agent, s, start, Direction::Left);
}
inline void run_rdfs(Exploration& state, AgentId agent, const Subtree& s, VertexId start) {
  run_dfs(state, agent, s, start, Direction::Right);
}

/// Whole-tree subtree rooted at the map root.
inline Subtree whole_tree(const KnownMap& map) { return Subtree{map.root(), std::nullopt, 0}; }

// ---------------------------------------------------------------------------
// Runs

enum class IterationAction { Initial, Ldfs, Rdfs, Split };
std::string_view to_string(IterationAction a);

struct IterationRecord {
  std::int32_t index = 0;
  VertexId root = 0;
  std::uint32_t root_depth = 0;
  std::uint32_t agents_used = 0;
  IterationAction action = IterationAction::Initial;
  std::int64_t left_depth = -1;
  std::int64_t right_depth = -1;
  std::vector<AgentId> agents;
};

/// How an agent's traversals map onto the canonical L-DFS sequence:
/// forward for L-DFS programs, reversed for R-DFS programs.
enum class CoverMode : std::uint8_t { None, Forward, Backward };

struct RunResult {
  std::size_t explored_with_root = 0;
  std::size_t explored_without_root = 0;
  bool fully_explored = false;
  Trace trace;
  std::vector<IterationRecord> iterations;
  std::vector<AgentState> agents;
  std::vector<CoverMode> cover_modes;
  /// Roots of all subtrees in the final collection (Divide & Explore only).
  std::vector<VertexId> subtree_roots;
};

enum class StrategyKind { DivideExplore, Ldfs, Rdfs, GreedyNearest };
StrategyKind parse_strategy(std::string_view name);
std::string_view to_string(StrategyKind kind);
inline constexpr StrategyKind kAllStrategies[] = {StrategyKind::DivideExplore, StrategyKind::Ldfs,
                                                  StrategyKind::Rdfs, StrategyKind::GreedyNearest};

/// Divide & Explore on a fresh state.
RunResult divide_and_explore(Exploration& state);
/// Every agent in turn runs L-DFS (R-DFS) over the whole tree from the root.
RunResult sequential_dfs(Exploration& state, Direction dir);
/// Every agent in turn repeatedly walks to the closest reachable stub.
/// Ties are broken by a generator seeded with `seed`.
RunResult greedy_nearest(Exploration& state, std::uint64_t seed);

RunResult run_strategy(StrategyKind kind, Exploration& state, std::uint64_t seed = 0);

/// Collects counts and agent states from a finished exploration.
RunResult collect_result(const Exploration& state);

}  // namespace treexp
