#include "treexp/engine.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace treexp {

KnownMap::KnownMap(VertexId root) : root_(root) {
  ensure(root);
  status_[root] = VertexStatus::Stub;
  parent_[root] = kNoVertex;
  depth_[root] = 0;
  stubs_below_[root] = 1;
}

void KnownMap::ensure(VertexId v) {
  if (v >= status_.size()) {
    std::size_t n = std::max<std::size_t>(v + 1, status_.size() * 2);
    status_.resize(n, VertexStatus::Unknown);
    parent_.resize(n, kNoVertex);
    depth_.resize(n, 0);
    port_at_parent_.resize(n, 0);
    ports_.resize(n);
    stubs_below_.resize(n, 0);
  }
}

void KnownMap::add_stub(VertexId v, VertexId parent, Port port) {
  ensure(v);
  if (status_[v] != VertexStatus::Unknown) {
    throw std::logic_error("vertex " + std::to_string(v) + " revealed twice");
  }
  status_[v] = VertexStatus::Stub;
  parent_[v] = parent;
  depth_[v] = depth_[parent] + 1;
  port_at_parent_[v] = port;
  stubs_below_[v] = 1;
}

void KnownMap::explore_root(std::span<const VertexId> children) {
  explore(root_, children);
}

void KnownMap::explore(VertexId v, std::span<const VertexId> children) {
  if (!is_stub(v)) throw std::logic_error("explore on non-stub vertex " + std::to_string(v));
  status_[v] = VertexStatus::Explored;
  ++explored_count_;
  if (!children.empty()) ensure(*std::max_element(children.begin(), children.end()));
  auto& ps = ports_[v];
  ps.clear();
  if (v != root_) ps.push_back(parent_[v]);
  for (VertexId c : children) {
    Port p = static_cast<Port>(ps.size());
    ps.push_back(c);
    add_stub(c, v, p);
  }
  // v stopped being a stub; its children are new stubs.
  std::int64_t delta = static_cast<std::int64_t>(children.size()) - 1;
  if (delta != 0) {
    for (VertexId u = v; u != kNoVertex; u = parent_[u]) {
      stubs_below_[u] = static_cast<std::uint64_t>(static_cast<std::int64_t>(stubs_below_[u]) + delta);
    }
  }
}

VertexId KnownMap::ancestor_at_depth(VertexId v, std::uint32_t d) const {
  while (depth_[v] > d) v = parent_[v];
  return v;
}

bool KnownMap::is_descendant(VertexId v, VertexId top) const {
  if (depth_[v] < depth_[top]) return false;
  return ancestor_at_depth(v, depth_[top]) == top;
}

std::uint32_t KnownMap::distance(VertexId a, VertexId b) const {
  std::uint32_t dist = 0;
  while (depth_[a] > depth_[b]) { a = parent_[a]; ++dist; }
  while (depth_[b] > depth_[a]) { b = parent_[b]; ++dist; }
  while (a != b) {
    a = parent_[a];
    b = parent_[b];
    dist += 2;
  }
  return dist;
}

std::vector<VertexId> KnownMap::path(VertexId a, VertexId b) const {
  std::vector<VertexId> up;
  std::vector<VertexId> down;
  while (depth_[a] > depth_[b]) { up.push_back(a); a = parent_[a]; }
  while (depth_[b] > depth_[a]) { down.push_back(b); b = parent_[b]; }
  while (a != b) {
    up.push_back(a);
    down.push_back(b);
    a = parent_[a];
    b = parent_[b];
  }
  up.push_back(a);
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

std::string format_trace(const Trace& trace) {
  std::string out;
  out.reserve(trace.size() * 28);
  for (const auto& e : trace) {
    out += std::to_string(e.step);
    out += ' ';
    out += std::to_string(e.agent);
    out += ' ';
    out += std::to_string(e.from);
    out += ' ';
    out += std::to_string(e.to);
    out += ' ';
    out += std::to_string(e.port);
    out += ' ';
    out += std::to_string(e.energy_left);
    out += e.newly_explored ? " 1 " : " 0 ";
    out += std::to_string(e.iteration);
    out += '\n';
  }
  return out;
}

Trace parse_trace(const std::string& text) {
  Trace trace;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    MoveEvent e;
    int newly = 0;
    if (!(ls >> e.step >> e.agent >> e.from >> e.to >> e.port >> e.energy_left >> newly >> e.iteration)) {
      throw std::runtime_error("malformed trace line: " + line);
    }
    e.newly_explored = newly != 0;
    trace.push_back(e);
  }
  return trace;
}

KnownTreeSource::KnownTreeSource(const Tree& tree) : tree_(&tree) {
  if (!tree.is_normalized()) throw TreeError("known-tree source requires normalized ports");
}

std::vector<VertexId> KnownTreeSource::reveal_root() {
  auto ps = tree_->ports(tree_->root());
  return {ps.begin(), ps.end()};
}

std::vector<VertexId> KnownTreeSource::reveal(const Exploration&, const RevealRequest& request) {
  auto ps = tree_->ports(request.vertex);
  return {ps.begin() + 1, ps.end()};
}

Exploration::Exploration(TopologySource& source, std::uint32_t agents, std::uint32_t budget)
    : source_(&source), map_(source.root()), budget_(budget) {
  if (agents == 0) throw EngineError(EngineError::Code::InvalidParameters, "at least one agent required");
  agents_.resize(agents);
  for (AgentId a = 0; a < agents; ++a) {
    agents_[a] = AgentState{a, source.root(), budget, false, 0};
  }
  auto children = source_->reveal_root();
  map_.explore_root(children);
}

MoveEvent Exploration::traverse(AgentId a, Port port) {
  if (finished_) throw EngineError(EngineError::Code::MoveIntoFinishedRun, "run already finished");
  if (a >= agents_.size()) throw EngineError(EngineError::Code::InvalidAgent, "no agent " + std::to_string(a));
  AgentState& agent = agents_[a];
  if (agent.energy == 0) {
    throw EngineError(EngineError::Code::OutOfEnergy, "agent " + std::to_string(a) + " has no energy left");
  }
  VertexId from = agent.position;
  auto ports = map_.ports(from);
  if (port >= ports.size()) {
    throw EngineError(EngineError::Code::InvalidPort,
                      "port " + std::to_string(port) + " invalid at vertex " + std::to_string(from));
  }
  VertexId to = ports[port];
  agent.position = to;
  --agent.energy;
  ++agent.moves;

  MoveEvent event;
  event.step = trace_.size();
  event.agent = a;
  event.from = from;
  event.to = to;
  event.port = port;
  event.energy_left = agent.energy;
  event.newly_explored = map_.is_stub(to);
  event.iteration = iteration_;

  source_->on_move(*this, event);
  if (event.newly_explored) {
    RevealRequest request{to, from, map_.depth(to), a, agent.energy};
    auto children = source_->reveal(*this, request);
    map_.explore(to, children);
  }
  trace_.push_back(event);
  return event;
}

bool Exploration::walk_to(AgentId a, VertexId target) {
  if (a >= agents_.size()) throw EngineError(EngineError::Code::InvalidAgent, "no agent " + std::to_string(a));
  if (!map_.is_known(target)) {
    throw EngineError(EngineError::Code::InvalidParameters, "walk_to unknown vertex " + std::to_string(target));
  }
  auto route = map_.path(agents_[a].position, target);
  for (std::size_t i = 1; i < route.size(); ++i) {
    if (agents_[a].energy == 0) return false;
    VertexId here = route[i - 1];
    VertexId next = route[i];
    Port p = map_.parent(next) == here ? map_.port_at_parent(next) : 0;
    traverse(a, p);
  }
  return true;
}

}  // namespace treexp
