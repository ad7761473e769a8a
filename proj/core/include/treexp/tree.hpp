#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace treexp {

using VertexId = std::uint32_t;
using Port = std::uint32_t;
using AgentId = std::uint32_t;

inline constexpr VertexId kNoVertex = UINT32_MAX;

class TreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One undirected edge with its local port label at each endpoint.
struct PortEdge {
  VertexId u = 0;
  VertexId v = 0;
  Port port_u = 0;
  Port port_v = 0;

  friend bool operator==(const PortEdge&, const PortEdge&) = default;
};

/// Rooted tree with locally labeled ports. `neighbor(v, p)` is the vertex
/// reached from `v` through port `p`; ports at `v` are exactly 0..degree(v)-1.
///
/// Depth, parent, and subtree-size caches are computed once at construction,
/// so a Tree is immutable and cheap to share between runs.
class Tree {
 public:
  /// Validates and builds. Throws TreeError on ids out of range, duplicate
  /// edges, port collisions/gaps, cycles, or disconnection.
  static Tree from_edges(std::uint32_t n, VertexId root, std::span<const PortEdge> edges);

  std::uint32_t size() const { return static_cast<std::uint32_t>(ports_.size()); }
  VertexId root() const { return root_; }
  std::uint32_t degree(VertexId v) const { return static_cast<std::uint32_t>(ports_[v].size()); }
  VertexId neighbor(VertexId v, Port p) const { return ports_[v][p]; }
  std::span<const VertexId> ports(VertexId v) const { return ports_[v]; }

  VertexId parent(VertexId v) const { return parent_[v]; }
  std::uint32_t depth(VertexId v) const { return depth_[v]; }
  std::uint32_t subtree_size(VertexId v) const { return subtree_size_[v]; }
  /// Port at `v` that leads to its parent; undefined for the root.
  Port parent_port(VertexId v) const { return parent_port_[v]; }
  std::uint32_t max_depth() const { return max_depth_; }

  /// Ports at `v` leading to children, in increasing label order.
  std::vector<Port> child_ports(VertexId v) const;

  /// True when every non-root vertex reaches its parent through port 0.
  bool is_normalized() const;

  /// All edges, each once, sorted by (min id, max id).
  std::vector<PortEdge> edges() const;

  friend bool operator==(const Tree& a, const Tree& b) {
    return a.root_ == b.root_ && a.ports_ == b.ports_;
  }

 private:
  Tree() = default;
  void compute_meta();

  VertexId root_ = 0;
  std::vector<std::vector<VertexId>> ports_;
  std::vector<VertexId> parent_;
  std::vector<Port> parent_port_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::uint32_t> subtree_size_;
  std::uint32_t max_depth_ = 0;
};

/// Swaps, at every non-root vertex, the parent port with port 0. All other
/// labels keep their values, so sibling order is preserved. Idempotent.
Tree normalize_ports(const Tree& tree);

/// Offline ground truth: the tree, the number of agents and their budget.
struct Instance {
  Tree tree;
  std::uint32_t agents = 1;
  std::uint32_t budget = 0;

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Builds a normalized tree from a parent array (parent[root] ignored).
/// Children receive ports in increasing id order.
Tree tree_from_parents(std::span<const VertexId> parent, VertexId root = 0);

}  // namespace treexp
