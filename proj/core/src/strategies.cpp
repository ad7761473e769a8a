#include "treexp/strategies.hpp"

#include <algorithm>
#include <random>

namespace treexp {

DfsSequence dfs_sequence(const Tree& tree, Direction dir) {
  DfsSequence seq;
  if (tree.size() <= 1) return seq;
  seq.reserve(2 * (tree.size() - 1));
  // Iterative traversal: stack of (vertex, remaining child ports in visit order).
  struct Frame {
    VertexId v;
    std::vector<Port> order;
    std::size_t next = 0;
  };
  auto ordered_children = [&](VertexId v) {
    auto ports = tree.child_ports(v);
    if (dir == Direction::Right) std::reverse(ports.begin(), ports.end());
    return ports;
  };
  std::vector<Frame> stack;
  stack.push_back({tree.root(), ordered_children(tree.root())});
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next < f.order.size()) {
      VertexId c = tree.neighbor(f.v, f.order[f.next++]);
      seq.push_back({f.v, c});
      stack.push_back({c, ordered_children(c)});
    } else {
      VertexId v = f.v;
      stack.pop_back();
      if (!stack.empty()) seq.push_back({v, stack.back().v});
    }
  }
  return seq;
}

std::vector<Port> visible_child_ports(const KnownMap& map, const Subtree& s, VertexId v) {
  if (v == s.root && s.root_ports) return *s.root_ports;
  std::vector<Port> out;
  for (Port p = map.first_child_port(v); p < map.degree(v); ++p) out.push_back(p);
  return out;
}

bool subtree_contains(const KnownMap& map, const Subtree& s, VertexId v) {
  if (!map.is_known(v) || !map.is_descendant(v, s.root)) return false;
  if (v == s.root || !s.root_ports) return true;
  VertexId branch = map.ancestor_at_depth(v, map.depth(s.root) + 1);
  const auto& allowed = *s.root_ports;
  return std::find(allowed.begin(), allowed.end(), map.port_at_parent(branch)) != allowed.end();
}

std::uint64_t stubs_in(const KnownMap& map, const Subtree& s) {
  if (!map.is_explored(s.root)) return map.stubs_below(s.root);
  if (!s.root_ports) return map.stubs_below(s.root);
  std::uint64_t total = 0;
  auto ports = map.ports(s.root);
  for (Port p : *s.root_ports) total += map.stubs_below(ports[p]);
  return total;
}

namespace {

// Picks the child port (by direction) whose subtree holds a stub.
std::optional<Port> pick_port(const KnownMap& map, VertexId v, const std::vector<Port>& candidates, Direction dir) {
  auto ports = map.ports(v);
  auto has_stub = [&](Port p) { return map.stubs_below(ports[p]) > 0; };
  if (dir == Direction::Left) {
    for (Port p : candidates) {
      if (has_stub(p)) return p;
    }
  } else {
    for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
      if (has_stub(*it)) return *it;
    }
  }
  return std::nullopt;
}

VertexId first_unexplored(const KnownMap& map, const Subtree& s, Direction dir) {
  if (map.is_stub(s.root)) return s.root;
  VertexId v = s.root;
  while (true) {
    auto port = pick_port(map, v, visible_child_ports(map, s, v), dir);
    if (!port) throw NoUnexploredError();
    VertexId c = map.ports(v)[*port];
    if (map.is_stub(c)) return c;
    v = c;
  }
}

}  // namespace

VertexId leftmost_unexplored(const KnownMap& map, const Subtree& s) {
  return first_unexplored(map, s, Direction::Left);
}

VertexId rightmost_unexplored(const KnownMap& map, const Subtree& s) {
  return first_unexplored(map, s, Direction::Right);
}

Subtree move_root_down(const KnownMap& map, Subtree s) {
  while (map.is_explored(s.root)) {
    auto ports = map.ports(s.root);
    std::size_t leading = 0;
    bool stub_child = false;
    VertexId only = kNoVertex;
    for (Port p : visible_child_ports(map, s, s.root)) {
      VertexId c = ports[p];
      if (map.stubs_below(c) == 0) continue;
      ++leading;
      only = c;
      if (map.is_stub(c)) stub_child = true;
    }
    if (leading != 1 || stub_child) break;
    s.root = only;
    s.root_ports.reset();
  }
  return s;
}

std::pair<Subtree, Subtree> split_subtree(const KnownMap& map, const Subtree& s, VertexId left, VertexId right) {
  const std::uint32_t below = map.depth(s.root) + 1;
  if (!subtree_contains(map, s, right) || right == s.root) {
    throw std::logic_error("split target is not strictly inside the subtree");
  }
  VertexId branch = map.ancestor_at_depth(right, below);
  if (left != kNoVertex && map.depth(left) >= below && map.ancestor_at_depth(left, below) == branch) {
    throw std::logic_error("leftmost and rightmost unexplored vertices hang below the same child");
  }
  Port cut = map.port_at_parent(branch);
  Subtree first{s.root, std::vector<Port>{}, 0};
  for (Port p : visible_child_ports(map, s, s.root)) {
    if (p != cut) first.root_ports->push_back(p);
  }
  Subtree second{s.root, std::vector<Port>{cut}, 0};
  return {first, second};
}

SubtreeSet::SubtreeSet(VertexId root) { items_.push_back(Subtree{root, std::nullopt, 0}); }

void SubtreeSet::move_roots_down(const KnownMap& map) {
  for (auto& s : items_) {
    if (stubs_in(map, s) > 0) s = move_root_down(map, s);
  }
}

std::optional<std::size_t> SubtreeSet::highest_with_stub(const KnownMap& map) const {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (stubs_in(map, items_[i]) == 0) continue;
    if (!best) {
      best = i;
      continue;
    }
    const auto& a = items_[i];
    const auto& b = items_[*best];
    auto da = map.depth(a.root);
    auto db = map.depth(b.root);
    if (da < db || (da == db && a.created < b.created)) best = i;
  }
  return best;
}

std::pair<std::size_t, std::size_t> SubtreeSet::split(const KnownMap& map, std::size_t index, VertexId left,
                                                      VertexId right) {
  auto [first, second] = split_subtree(map, items_.at(index), left, right);
  first.created = next_created_++;
  second.created = next_created_++;
  items_[index] = std::move(first);
  items_.push_back(std::move(second));
  return {index, items_.size() - 1};
}

void run_dfs(Exploration& state, AgentId agent, const Subtree& s, VertexId start, Direction dir) {
  const KnownMap& map = state.map();
  if (!subtree_contains(map, s, start)) throw std::invalid_argument("DFS start vertex is not in the subtree");
  state.mark_dispatched(agent);
  if (!state.walk_to(agent, start)) return;
  while (state.agent(agent).energy > 0 && stubs_in(map, s) > 0) {
    VertexId v = state.agent(agent).position;
    auto port = pick_port(map, v, visible_child_ports(map, s, v), dir);
    if (port) {
      state.traverse(agent, *port);
    } else if (v == s.root) {
      break;
    } else {
      state.traverse(agent, 0);
    }
  }
}

std::string_view to_string(IterationAction a) {
  switch (a) {
    case IterationAction::Initial: return "INITIAL";
    case IterationAction::Ldfs: return "LDFS";
    case IterationAction::Rdfs: return "RDFS";
    case IterationAction::Split: return "SPLIT";
  }
  return "?";
}

StrategyKind parse_strategy(std::string_view name) {
  if (name == "dnd") return StrategyKind::DivideExplore;
  if (name == "ldfs") return StrategyKind::Ldfs;
  if (name == "rdfs") return StrategyKind::Rdfs;
  if (name == "greedy-nearest") return StrategyKind::GreedyNearest;
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::DivideExplore: return "dnd";
    case StrategyKind::Ldfs: return "ldfs";
    case StrategyKind::Rdfs: return "rdfs";
    case StrategyKind::GreedyNearest: return "greedy-nearest";
  }
  return "?";
}

RunResult collect_result(const Exploration& state) {
  RunResult r;
  r.explored_with_root = state.explored_count();
  r.explored_without_root = r.explored_with_root - 1;
  r.fully_explored = state.is_fully_explored();
  r.trace = state.trace();
  r.agents.assign(state.agents().begin(), state.agents().end());
  r.cover_modes.assign(state.agents().size(), CoverMode::None);
  return r;
}

RunResult divide_and_explore(Exploration& state) {
  const KnownMap& map = state.map();
  const auto k = static_cast<std::uint32_t>(state.agents().size());
  const auto budget = static_cast<std::int64_t>(state.budget());
  std::vector<CoverMode> modes(k, CoverMode::None);
  std::vector<IterationRecord> records;
  SubtreeSet set(map.root());

  state.set_iteration(0);
  IterationRecord initial{0, map.root(), 0, std::min<std::uint32_t>(k, 2), IterationAction::Initial, -1, -1, {}};
  const Subtree whole = whole_tree(map);
  modes[0] = CoverMode::Forward;
  initial.agents.push_back(0);
  run_ldfs(state, 0, whole, map.root());
  if (k >= 2) {
    modes[1] = CoverMode::Backward;
    initial.agents.push_back(1);
    run_rdfs(state, 1, whole, map.root());
  }
  records.push_back(initial);

  AgentId next = std::min<std::uint32_t>(k, 2);
  for (std::int32_t t = 1; !state.is_fully_explored() && next < k; ++t) {
    state.set_iteration(t);
    set.move_roots_down(map);
    auto index = set.highest_with_stub(map);
    if (!index) break;
    const Subtree s = set.at(*index);
    const VertexId left = leftmost_unexplored(map, s);
    const VertexId right = rightmost_unexplored(map, s);
    const std::int64_t root_depth = map.depth(s.root);
    // Integer form of  d(v) - d(r_S) <= max{1, (B - d(r_S)) / 3}.
    const std::int64_t slack = std::max<std::int64_t>(3, budget - root_depth);

    IterationRecord rec;
    rec.index = t;
    rec.root = s.root;
    rec.root_depth = static_cast<std::uint32_t>(root_depth);
    rec.left_depth = map.depth(left);
    rec.right_depth = map.depth(right);

    if (3 * (rec.left_depth - root_depth) <= slack) {
      AgentId a = next++;
      modes[a] = CoverMode::Forward;
      rec.action = IterationAction::Ldfs;
      rec.agents = {a};
      run_ldfs(state, a, s, left);
    } else if (3 * (rec.right_depth - root_depth) <= slack) {
      AgentId a = next++;
      modes[a] = CoverMode::Backward;
      rec.action = IterationAction::Rdfs;
      rec.agents = {a};
      run_rdfs(state, a, s, right);
    } else {
      auto [i1, i2] = set.split(map, *index, left, right);
      const Subtree first = set.at(i1);
      const Subtree second = set.at(i2);
      rec.action = IterationAction::Split;
      AgentId a = next++;
      modes[a] = CoverMode::Backward;
      rec.agents.push_back(a);
      run_rdfs(state, a, first, s.root);
      if (next < k) {
        AgentId b = next++;
        modes[b] = CoverMode::Forward;
        rec.agents.push_back(b);
        run_ldfs(state, b, second, s.root);
      }
    }
    rec.agents_used = static_cast<std::uint32_t>(rec.agents.size());
    records.push_back(std::move(rec));
  }

  RunResult r = collect_result(state);
  r.iterations = std::move(records);
  r.cover_modes = std::move(modes);
  for (const auto& s : set.items()) r.subtree_roots.push_back(s.root);
  return r;
}

RunResult sequential_dfs(Exploration& state, Direction dir) {
  const auto k = static_cast<std::uint32_t>(state.agents().size());
  const Subtree whole = whole_tree(state.map());
  std::vector<CoverMode> modes(k, CoverMode::None);
  for (AgentId a = 0; a < k && !state.is_fully_explored(); ++a) {
    state.set_iteration(static_cast<std::int32_t>(a));
    modes[a] = dir == Direction::Left ? CoverMode::Forward : CoverMode::Backward;
    run_dfs(state, a, whole, state.map().root(), dir);
  }
  RunResult r = collect_result(state);
  r.cover_modes = std::move(modes);
  return r;
}

namespace {

// Closest stubs within `reach` edges of `from`, all at the same distance.
std::vector<VertexId> nearest_stubs(const KnownMap& map, VertexId from, std::uint32_t reach,
                                    std::vector<std::uint32_t>& mark, std::uint32_t stamp) {
  if (mark.size() < map.id_bound()) mark.resize(map.id_bound(), 0);
  std::vector<VertexId> layer{from};
  std::vector<VertexId> next;
  std::vector<VertexId> found;
  mark[from] = stamp;
  for (std::uint32_t dist = 1; dist <= reach && !layer.empty(); ++dist) {
    next.clear();
    for (VertexId v : layer) {
      if (!map.is_explored(v)) continue;
      for (VertexId w : map.ports(v)) {
        if (mark[w] == stamp) continue;
        mark[w] = stamp;
        if (map.is_stub(w)) {
          found.push_back(w);
        } else {
          next.push_back(w);
        }
      }
    }
    if (!found.empty()) break;
    layer.swap(next);
  }
  std::sort(found.begin(), found.end());
  return found;
}

}  // namespace

RunResult greedy_nearest(Exploration& state, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto k = static_cast<std::uint32_t>(state.agents().size());
  std::vector<std::uint32_t> mark;
  std::uint32_t stamp = 0;
  for (AgentId a = 0; a < k && !state.is_fully_explored(); ++a) {
    state.set_iteration(static_cast<std::int32_t>(a));
    state.mark_dispatched(a);
    while (state.agent(a).energy > 0 && !state.is_fully_explored()) {
      auto candidates = nearest_stubs(state.map(), state.agent(a).position, state.agent(a).energy, mark, ++stamp);
      if (candidates.empty()) break;
      VertexId target = candidates[candidates.size() == 1 ? 0 : rng() % candidates.size()];
      state.walk_to(a, target);
    }
  }
  return collect_result(state);
}

RunResult run_strategy(StrategyKind kind, Exploration& state, std::uint64_t seed) {
  switch (kind) {
    case StrategyKind::DivideExplore: return divide_and_explore(state);
    case StrategyKind::Ldfs: return sequential_dfs(state, Direction::Left);
    case StrategyKind::Rdfs: return sequential_dfs(state, Direction::Right);
    case StrategyKind::GreedyNearest: return greedy_nearest(state, seed);
  }
  throw std::invalid_argument("unknown strategy");
}

}  // namespace treexp
