#include "treexp/tree.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace treexp {

Tree Tree::from_edges(std::uint32_t n, VertexId root, std::span<const PortEdge> edges) {
  if (n == 0) throw TreeError("tree must have at least one vertex");
  if (root >= n) throw TreeError("root id out of range");
  if (edges.size() != n - 1) {
    throw TreeError("expected " + std::to_string(n - 1) + " edges, got " + std::to_string(edges.size()));
  }

  std::set<std::pair<VertexId, VertexId>> seen;
  std::vector<std::vector<std::pair<Port, VertexId>>> incident(n);
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw TreeError("vertex id out of range in edge");
    if (e.u == e.v) throw TreeError("self loop at vertex " + std::to_string(e.u));
    auto key = std::minmax(e.u, e.v);
    if (!seen.insert(key).second) {
      throw TreeError("duplicate edge " + std::to_string(key.first) + "-" + std::to_string(key.second));
    }
    incident[e.u].emplace_back(e.port_u, e.v);
    incident[e.v].emplace_back(e.port_v, e.u);
  }

  Tree t;
  t.root_ = root;
  t.ports_.resize(n);
  for (VertexId v = 0; v < n; ++v) {
    auto& inc = incident[v];
    t.ports_[v].assign(inc.size(), kNoVertex);
    for (auto [p, w] : inc) {
      if (p >= inc.size()) {
        throw TreeError("port " + std::to_string(p) + " at vertex " + std::to_string(v) +
                        " exceeds degree " + std::to_string(inc.size()));
      }
      if (t.ports_[v][p] != kNoVertex) {
        throw TreeError("port collision at vertex " + std::to_string(v) + " port " + std::to_string(p));
      }
      t.ports_[v][p] = w;
    }
  }
  t.compute_meta();
  return t;
}

void Tree::compute_meta() {
  const auto n = size();
  parent_.assign(n, kNoVertex);
  parent_port_.assign(n, 0);
  depth_.assign(n, 0);
  subtree_size_.assign(n, 1);
  max_depth_ = 0;

  std::vector<VertexId> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  order.push_back(root_);
  seen[root_] = 1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    VertexId v = order[i];
    for (Port p = 0; p < ports_[v].size(); ++p) {
      VertexId w = ports_[v][p];
      if (w == parent_[v]) continue;
      if (seen[w]) throw TreeError("graph contains a cycle through vertex " + std::to_string(w));
      seen[w] = 1;
      parent_[w] = v;
      depth_[w] = depth_[v] + 1;
      max_depth_ = std::max(max_depth_, depth_[w]);
      order.push_back(w);
    }
  }
  if (order.size() != n) throw TreeError("graph is disconnected");

  for (VertexId v = 0; v < n; ++v) {
    if (v == root_) continue;
    const auto& ps = ports_[v];
    parent_port_[v] = static_cast<Port>(std::find(ps.begin(), ps.end(), parent_[v]) - ps.begin());
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (*it != root_) subtree_size_[parent_[*it]] += subtree_size_[*it];
  }
}

std::vector<Port> Tree::child_ports(VertexId v) const {
  std::vector<Port> out;
  for (Port p = 0; p < ports_[v].size(); ++p) {
    if (v == root_ || ports_[v][p] != parent_[v]) out.push_back(p);
  }
  return out;
}

bool Tree::is_normalized() const {
  for (VertexId v = 0; v < size(); ++v) {
    if (v != root_ && parent_port_[v] != 0) return false;
  }
  return true;
}

std::vector<PortEdge> Tree::edges() const {
  std::vector<PortEdge> out;
  out.reserve(size() > 0 ? size() - 1 : 0);
  for (VertexId v = 0; v < size(); ++v) {
    for (Port p = 0; p < ports_[v].size(); ++p) {
      VertexId w = ports_[v][p];
      if (v < w) {
        const auto& wp = ports_[w];
        Port q = static_cast<Port>(std::find(wp.begin(), wp.end(), v) - wp.begin());
        out.push_back({v, w, p, q});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const PortEdge& a, const PortEdge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  return out;
}

Tree normalize_ports(const Tree& tree) {
  auto edges = tree.edges();
  for (auto& e : edges) {
    // Relabel each endpoint independently: swap(parent port, 0) at non-root vertices.
    auto relabel = [&](VertexId at, Port p) -> Port {
      if (at == tree.root()) return p;
      Port pp = tree.parent_port(at);
      if (p == pp) return 0;
      if (p == 0) return pp;
      return p;
    };
    e.port_u = relabel(e.u, e.port_u);
    e.port_v = relabel(e.v, e.port_v);
  }
  return Tree::from_edges(tree.size(), tree.root(), edges);
}

Tree tree_from_parents(std::span<const VertexId> parent, VertexId root) {
  const auto n = static_cast<std::uint32_t>(parent.size());
  std::vector<std::uint32_t> next_port(n, 0);
  for (VertexId v = 0; v < n; ++v) {
    if (v != root) next_port[v] = 1;
  }
  std::vector<PortEdge> edges;
  edges.reserve(n > 0 ? n - 1 : 0);
  for (VertexId v = 0; v < n; ++v) {
    if (v == root) continue;
    VertexId p = parent[v];
    if (p >= n) throw TreeError("parent id out of range");
    edges.push_back({p, v, next_port[p]++, 0});
  }
  return Tree::from_edges(n, root, edges);
}

}  // namespace treexp
