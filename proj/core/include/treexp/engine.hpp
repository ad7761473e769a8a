#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "treexp/tree.hpp"

namespace treexp {

enum class VertexStatus : std::uint8_t { Unknown, Stub, Explored };

/// The map shared by all agents: explored vertices with their full port
/// lists, plus stubs (vertices known to exist behind an unused port).
class KnownMap {
 public:
  explicit KnownMap(VertexId root);

  VertexId root() const { return root_; }
  VertexStatus status(VertexId v) const {
    return v < status_.size() ? status_[v] : VertexStatus::Unknown;
  }
  bool is_explored(VertexId v) const { return status(v) == VertexStatus::Explored; }
  bool is_stub(VertexId v) const { return status(v) == VertexStatus::Stub; }
  bool is_known(VertexId v) const { return status(v) != VertexStatus::Unknown; }

  VertexId parent(VertexId v) const { return parent_[v]; }
  std::uint32_t depth(VertexId v) const { return depth_[v]; }
  /// Port at parent(v) that leads to v.
  Port port_at_parent(VertexId v) const { return port_at_parent_[v]; }
  /// Full port list of an explored vertex; port 0 is the parent for v != root.
  std::span<const VertexId> ports(VertexId v) const { return ports_[v]; }
  std::uint32_t degree(VertexId v) const { return static_cast<std::uint32_t>(ports_[v].size()); }
  /// First port label that leads to a child: 0 at the root, 1 elsewhere.
  Port first_child_port(VertexId v) const { return v == root_ ? 0 : 1; }
  /// Stubs inside T(v), counting v itself when it is a stub.
  std::uint64_t stubs_below(VertexId v) const { return stubs_below_[v]; }

  std::size_t explored_count() const { return explored_count_; }
  std::size_t stub_count() const { return stubs_below_[root_]; }
  /// Upper bound (exclusive) on ids seen so far.
  std::size_t id_bound() const { return status_.size(); }

  /// Number of edges on the tree path between two known vertices.
  std::uint32_t distance(VertexId a, VertexId b) const;
  /// Vertices from `a` to `b` inclusive along the tree path.
  std::vector<VertexId> path(VertexId a, VertexId b) const;
  /// True when `v` lies in T(`top`).
  bool is_descendant(VertexId v, VertexId top) const;
  /// Ancestor of `v` at depth `d` (v itself if depth(v) == d).
  VertexId ancestor_at_depth(VertexId v, std::uint32_t d) const;

  /// Marks stub `v` explored with the given children (port order).
  void explore(VertexId v, std::span<const VertexId> children);
  /// Explores the root with all neighbors as children.
  void explore_root(std::span<const VertexId> children);

 private:
  void ensure(VertexId v);
  void add_stub(VertexId v, VertexId parent, Port port);

  VertexId root_;
  std::vector<VertexStatus> status_;
  std::vector<VertexId> parent_;
  std::vector<std::uint32_t> depth_;
  std::vector<Port> port_at_parent_;
  std::vector<std::vector<VertexId>> ports_;
  std::vector<std::uint64_t> stubs_below_;
  std::size_t explored_count_ = 0;
};

struct AgentState {
  AgentId id = 0;
  VertexId position = 0;
  std::uint32_t energy = 0;
  bool dispatched = false;
  std::uint32_t moves = 0;
};

/// One edge traversal. `iteration` is the strategy-defined dispatch round.
struct MoveEvent {
  std::uint64_t step = 0;
  AgentId agent = 0;
  VertexId from = 0;
  VertexId to = 0;
  Port port = 0;
  std::uint32_t energy_left = 0;
  bool newly_explored = false;
  std::int32_t iteration = 0;

  friend bool operator==(const MoveEvent&, const MoveEvent&) = default;
};

using Trace = std::vector<MoveEvent>;

/// Trace text: one `step agent from to port energy_left newly_explored iteration_id` per line.
std::string format_trace(const Trace& trace);
Trace parse_trace(const std::string& text);

class Exploration;

struct RevealRequest {
  VertexId vertex = 0;
  VertexId parent = 0;
  std::uint32_t depth = 0;
  AgentId agent = 0;
  std::uint32_t energy_left = 0;
};

/// Answers what an agent sees when it first arrives at a vertex. A known
/// tree answers from ground truth; adversaries decide lazily.
class TopologySource {
 public:
  virtual ~TopologySource() = default;
  virtual VertexId root() const = 0;
  /// Neighbors of the root in port order.
  virtual std::vector<VertexId> reveal_root() = 0;
  /// Called after every traversal, before any reveal it causes.
  virtual void on_move(const Exploration& state, const MoveEvent& move) {
    (void)state;
    (void)move;
  }
  /// Children (ports 1..degree-1 in order) of a vertex being explored.
  virtual std::vector<VertexId> reveal(const Exploration& state, const RevealRequest& request) = 0;
  /// True while the source still owes structure that has no stub yet.
  virtual bool pending() const { return false; }
};

/// Ground-truth source over a normalized tree.
class KnownTreeSource final : public TopologySource {
 public:
  explicit KnownTreeSource(const Tree& tree);
  VertexId root() const override { return tree_->root(); }
  std::vector<VertexId> reveal_root() override;
  std::vector<VertexId> reveal(const Exploration& state, const RevealRequest& request) override;

 private:
  const Tree* tree_;
};

class EngineError : public std::runtime_error {
 public:
  enum class Code { OutOfEnergy, InvalidPort, MoveIntoFinishedRun, InvalidAgent, InvalidParameters };
  EngineError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// Mutable state of one run: agents, shared map, and the event trace.
/// Moves are serialized; each traversal is visible to every agent at once.
class Exploration {
 public:
  Exploration(TopologySource& source, std::uint32_t agents, std::uint32_t budget);

  const KnownMap& map() const { return map_; }
  std::span<const AgentState> agents() const { return agents_; }
  const AgentState& agent(AgentId a) const { return agents_.at(a); }
  std::uint32_t budget() const { return budget_; }
  const Trace& trace() const { return trace_; }
  TopologySource& source() { return *source_; }

  MoveEvent traverse(AgentId a, Port port);
  /// Walks the shortest path toward `target` (explored vertex or stub) until
  /// arrival or energy runs out. Returns true on arrival.
  bool walk_to(AgentId a, VertexId target);
  void mark_dispatched(AgentId a) { agents_.at(a).dispatched = true; }

  bool is_fully_explored() const { return map_.stub_count() == 0 && !source_->pending(); }

  void set_iteration(std::int32_t iteration) { iteration_ = iteration; }
  std::int32_t iteration() const { return iteration_; }
  void finish() { finished_ = true; }
  bool finished() const { return finished_; }

  /// Explored vertices including the root.
  std::size_t explored_count() const { return map_.explored_count(); }

 private:
  TopologySource* source_;
  KnownMap map_;
  std::vector<AgentState> agents_;
  std::uint32_t budget_;
  Trace trace_;
  std::int32_t iteration_ = 0;
  bool finished_ = false;
};

}  // namespace treexp
