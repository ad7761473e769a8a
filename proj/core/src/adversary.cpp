#include "treexp/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "treexp/opt_oracle.hpp"

namespace treexp {

// ---------------------------------------------------------------------------
// StarAdversary

StarAdversary::StarAdversary(std::uint32_t k, std::uint32_t budget)
    : k_(k), budget_(budget), short_total_(k * budget / 2) {
  if (k == 0) throw std::invalid_argument("star adversary needs k >= 1");
  if (budget == 0 || budget % 2 != 0) throw std::invalid_argument("star adversary needs a positive even budget");
}

std::vector<VertexId> StarAdversary::reveal_root() {
  const std::uint32_t degree = k_ + short_total_;
  parent_.assign(1, kNoVertex);
  depth_.assign(1, 0);
  ray_of_.assign(1, 0);
  std::vector<VertexId> children;
  for (std::uint32_t r = 0; r < degree; ++r) {
    VertexId id = static_cast<VertexId>(parent_.size());
    parent_.push_back(0);
    depth_.push_back(1);
    ray_of_.push_back(r);
    ray_.push_back(Ray::Unassigned);
    tail_.push_back(id);
    children.push_back(id);
  }
  return children;
}

std::vector<VertexId> StarAdversary::reveal(const Exploration&, const RevealRequest& request) {
  VertexId v = request.vertex;
  std::uint32_t r = ray_of_[v];
  if (parent_[v] == 0) {
    if (short_used_ < short_total_) {
      ray_[r] = Ray::Short;
      ++short_used_;
      return {};
    }
    ray_[r] = Ray::Long;
    ++long_used_;
  }
  if (depth_[v] >= budget_) return {};
  VertexId child = static_cast<VertexId>(parent_.size());
  parent_.push_back(v);
  depth_.push_back(depth_[v] + 1);
  ray_of_.push_back(r);
  tail_[r] = child;
  return {child};
}

Tree StarAdversary::finalize() const {
  std::vector<VertexId> parent = parent_;
  if (parent.empty()) parent.push_back(kNoVertex);
  std::uint32_t shorts = short_used_;
  std::vector<Ray> rays = ray_;
  if (rays.empty()) {
    // Nothing revealed yet: lay the root out as reveal_root would.
    for (std::uint32_t r = 0; r < k_ + short_total_; ++r) {
      parent.push_back(0);
      rays.push_back(Ray::Unassigned);
    }
  }
  std::vector<VertexId> tail = tail_;
  tail.resize(rays.size());
  for (std::uint32_t r = 0; r < rays.size(); ++r) {
    if (tail_.size() <= r) tail[r] = r + 1;
    if (rays[r] == Ray::Unassigned) rays[r] = shorts < short_total_ ? (++shorts, Ray::Short) : Ray::Long;
  }
  for (std::uint32_t r = 0; r < rays.size(); ++r) {
    if (rays[r] != Ray::Long) continue;
    VertexId at = tail[r];
    std::uint32_t depth = at < depth_.size() ? depth_[at] : 1;
    for (; depth < budget_; ++depth) {
      parent.push_back(at);
      at = static_cast<VertexId>(parent.size() - 1);
    }
  }
  return tree_from_parents(parent);
}

// ---------------------------------------------------------------------------
// Parameters

std::int64_t lb_delta(std::int64_t l, std::int64_t budget) {
  const std::int64_t x = 2 * l * budget;
  auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(x)));
  while (s * s > x) --s;
  while ((s + 1) * (s + 1) <= x) ++s;
  if (s * s < x) ++s;
  return s + 2 * l;
}

std::vector<std::string> lb_violations(const LBParams& p) {
  std::vector<std::string> out;
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) out.push_back(what);
  };
  need(p.l >= 2, "l >= 2");
  need(p.budget % 2 == 0, "B even");
  need(p.d1 % 2 == 0, "d1 even");
  need(p.d2 % 2 == 0, "d2 even");
  need(p.d1 > 0, "d1 > 0");
  need(p.d1 + p.delta < p.d2,
       "d1 + delta < d2 (" + std::to_string(p.d1 + p.delta) + " vs " + std::to_string(p.d2) + ")");
  need(3 * p.d2 <= 5 * p.d1, "3 d2 <= 5 d1");
  need(3 * p.d1 < p.budget, "3 d1 < B");
  need(p.budget <= p.d1 + 2 * p.d2, "B <= d1 + 2 d2");
  return out;
}

LBParams lb_params(std::int64_t l, std::int64_t budget, std::int64_t d1) {
  LBParams p{l, budget, d1, (budget - d1) / 2, lb_delta(l, budget)};
  auto bad = lb_violations(p);
  if (!bad.empty()) {
    std::string msg = "infeasible parameters:";
    for (const auto& b : bad) msg += " [" + b + "]";
    throw InfeasibleParams(msg);
  }
  return p;
}

std::string_view to_string(LbCase c) {
  switch (c) {
    case LbCase::Case1: return "1";
    case LbCase::Case2a: return "2a";
    case LbCase::Case2b: return "2b";
    case LbCase::Case2c: return "2c";
    case LbCase::Case3: return "3";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// LowerBoundAdversary

LowerBoundAdversary::LowerBoundAdversary(const LBParams& params) : params_(params) {
  auto bad = lb_violations(params);
  if (!bad.empty()) throw InfeasibleParams("infeasible parameters: " + bad.front());
  sub_.resize(static_cast<std::size_t>(params.l));
  agents_.resize(static_cast<std::size_t>(params.agents()));
  v_.push_back(LbVertex{});
  explorer_.push_back(kNoVertex);
}

VertexId LowerBoundAdversary::make_vertex(VertexId parent, LbKind kind, std::uint32_t branch, bool below_v2) {
  auto id = static_cast<VertexId>(v_.size());
  LbVertex meta;
  meta.parent = parent;
  meta.depth = v_[parent].depth + 1;
  meta.branch = branch;
  meta.kind = kind;
  meta.below_v2 = below_v2;
  v_.push_back(meta);
  explorer_.push_back(kNoVertex);
  if (kind == LbKind::Hub1) sub_[branch].hub1 = id;
  if (kind == LbKind::Hub1 || kind == LbKind::Adaptive) sub_[branch].vertices.push_back(id);
  return id;
}

std::vector<VertexId> LowerBoundAdversary::reveal_root() {
  std::vector<VertexId> children;
  const LbKind kind = params_.d1 == 1 ? LbKind::Hub1 : LbKind::Skeleton;
  for (std::uint32_t i = 0; i < sub_.size(); ++i) children.push_back(make_vertex(0, kind, i, false));
  return children;
}

void LowerBoundAdversary::on_move(const Exploration& state, const MoveEvent& move) {
  const LbVertex& to = v_[move.to];
  if (to.kind == LbKind::Hub1 && to.parent == move.from) enter(state, move.agent, to.branch, move.energy_left);
}

void LowerBoundAdversary::enter(const Exploration& state, AgentId agent, std::uint32_t branch, std::uint32_t energy) {
  LbAgent& rec = agents_.at(agent);
  if (std::find(rec.subtrees.begin(), rec.subtrees.end(), branch) != rec.subtrees.end()) return;
  LbSubtree& s = sub_[branch];
  const auto& p = params_;
  if (rec.subtrees.empty()) {
    s.fresh.push_back(agent);
    if (s.fresh.size() == 1) {
      s.budget += (p.budget + p.d2) / 2 - p.d1 + 2 * p.delta;
      s.cases.push_back(LbCase::Case1);
    } else if (s.fresh.size() == 2) {
      rec.subtrees.push_back(branch);
      trigger_case2(state, branch);
      return;
    }
  } else if (rec.subtrees.size() == 1) {
    rec.b_a = energy;
    if (energy % 2 != 0) violations_.push_back("odd remaining energy on second subtree entry");
    s.second.push_back(agent);
    s.budget += static_cast<std::int64_t>(energy) / 2 + 2;
    s.cases.push_back(LbCase::Case3);
  } else {
    violations_.push_back("agent " + std::to_string(agent) + " entered a third subtree");
  }
  rec.subtrees.push_back(branch);
}

void LowerBoundAdversary::mark_chain(VertexId top) {
  for (VertexId u = top; v_[u].kind != LbKind::Hub1; u = v_[u].parent) v_[u].on_chain = true;
}

void LowerBoundAdversary::trigger_case2(const Exploration& state, std::uint32_t branch) {
  LbSubtree& s = sub_[branch];
  const auto& p = params_;
  const AgentId a1 = s.fresh.front();
  const KnownMap& map = state.map();

  std::int64_t by_a1 = 0;
  for (VertexId v : s.vertices) {
    if (v == s.hub1 || explorer_[v] == kNoVertex) continue;
    if (v_[v].on_chain || explorer_[v] == a1) ++by_a1;
  }
  if (2 * by_a1 <= p.d1 + p.d2) {
    s.v1_passive = true;
    s.v2_passive = true;
    s.cases.push_back(LbCase::Case2a);
    return;
  }
  if (s.hub2 != kNoVertex) {
    s.v1_passive = true;
    s.regime = Regime::Case2b;
    s.cases.push_back(LbCase::Case2b);
    return;
  }

  // Cheapest stub through which the first agent can still reach depth d2.
  const AgentState& agent = state.agent(a1);
  VertexId best = kNoVertex;
  std::int64_t best_cost = 0;
  if (!s.depleted) {
    for (VertexId v : s.vertices) {
      if (!map.is_stub(v) || v_[v].below_v2 || v_[v].depth > p.d2) continue;
      std::int64_t cost = map.distance(agent.position, v) + (p.d2 - v_[v].depth);
      if (cost > agent.energy) continue;
      bool better = best == kNoVertex || cost < best_cost ||
                    (cost == best_cost && (v_[v].depth > v_[best].depth ||
                                           (v_[v].depth == v_[best].depth && v < best)));
      if (better) {
        best = v;
        best_cost = cost;
      }
    }
  }
  if (best != kNoVertex) {
    s.v1_passive = true;
    s.designated = best;
    mark_chain(best);
    s.regime = Regime::Case2b;
    s.cases.push_back(LbCase::Case2b);
    return;
  }
  s.regime = Regime::Case2c;
  s.cases.push_back(LbCase::Case2c);
}

bool LowerBoundAdversary::is_second(const LbSubtree& s, AgentId agent) const {
  return std::find(s.second.begin(), s.second.end(), agent) != s.second.end();
}

bool LowerBoundAdversary::stop_rule(const LbSubtree& s, const LbVertex& v, AgentId agent,
                                    std::uint32_t energy) const {
  const std::int64_t d = v.depth;
  const std::int64_t e = energy;
  const auto& p = params_;
  auto past = [&](std::int64_t level) { return d > level && e <= d - level; };
  if (s.first() == agent && past(p.d2)) return true;
  if (is_second(s, agent)) {
    if (v.below_v2 && past(p.d2)) return true;
    if (!v.below_v2 && !v.on_chain && past(p.d1)) return true;
  }
  if (s.regime == Regime::Case2b && past(p.d2)) return true;
  if (s.regime == Regime::Case2c && past(p.d1)) return true;
  return false;
}

std::vector<VertexId> LowerBoundAdversary::reveal(const Exploration&, const RevealRequest& request) {
  const VertexId v = request.vertex;
  explorer_[v] = request.agent;
  const LbVertex meta = v_[v];
  const auto& p = params_;

  if (meta.kind == LbKind::Skeleton) {
    LbKind kind = meta.depth + 1 == p.d1 ? LbKind::Hub1 : LbKind::Skeleton;
    return {make_vertex(v, kind, meta.branch, false)};
  }

  LbSubtree& s = sub_[meta.branch];
  auto count_nonleaf = [&] {
    if (++s.nonleaf >= s.budget && !s.depleted) {
      s.depleted = true;
      s.v1_passive = true;
      s.v2_passive = true;
    }
  };
  auto hub_children = [&](bool below_v2) {
    std::vector<VertexId> children;
    for (std::int64_t j = 0; j < p.delta; ++j) children.push_back(make_vertex(v, LbKind::Adaptive, meta.branch, below_v2));
    return children;
  };

  if (meta.kind == LbKind::Hub1) {
    count_nonleaf();
    return hub_children(false);
  }

  bool leaf = false;
  bool hub = false;
  const bool designated = v == s.designated;
  if (s.depleted) {
    leaf = true;
  } else if (designated) {
    hub = static_cast<std::int64_t>(meta.depth) == p.d2;
  } else if (meta.below_v2 ? s.v2_passive : s.v1_passive) {
    leaf = true;
  } else if (stop_rule(s, meta, request.agent, request.energy_left)) {
    leaf = true;
  } else if (!meta.below_v2 && s.hub2 == kNoVertex && s.designated == kNoVertex && s.first() == request.agent &&
             static_cast<std::int64_t>(meta.depth) == p.d2) {
    hub = true;
  }

  if (leaf) {
    if (designated) s.designated = kNoVertex;
    return {};
  }
  count_nonleaf();
  if (hub) {
    v_[v].kind = LbKind::Hub2;
    s.hub2 = v;
    s.designated = kNoVertex;
    mark_chain(v);
    return hub_children(true);
  }
  VertexId child = make_vertex(v, LbKind::Adaptive, meta.branch, meta.below_v2);
  if (designated) {
    s.designated = child;
    v_[child].on_chain = true;
  }
  return {child};
}

// ---------------------------------------------------------------------------
// Accounting and checks

bool CheckReport::ok() const {
  return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.pass; });
}

void CheckReport::add(std::string name, bool pass, std::string detail) {
  lines.push_back({std::move(name), pass, std::move(detail)});
}

LbAccount account_lb_run(const LowerBoundAdversary& adv, const Exploration& state) {
  const auto& meta = adv.vertices();
  const auto& p = adv.params();
  LbAccount acc;
  acc.subtrees.resize(static_cast<std::size_t>(p.l));
  acc.b_a.assign(state.agents().size(), 0);
  acc.subtree_visits.assign(state.agents().size(), 0);
  std::vector<std::vector<std::uint32_t>> visited(state.agents().size());
  std::vector<AgentId> explorer(meta.size(), kNoVertex);

  for (const auto& e : state.trace()) {
    if (e.newly_explored) explorer[e.to] = e.agent;
    const LbVertex& to = meta[e.to];
    if (to.kind != LbKind::Hub1 || to.parent != e.from) continue;
    auto& seen = visited[e.agent];
    if (std::find(seen.begin(), seen.end(), to.branch) != seen.end()) continue;
    auto& sa = acc.subtrees[to.branch];
    if (seen.empty()) {
      sa.fresh.push_back(e.agent);
    } else if (seen.size() == 1) {
      sa.second.push_back(e.agent);
      acc.b_a[e.agent] = e.energy_left;
    }
    seen.push_back(to.branch);
  }
  for (std::size_t a = 0; a < visited.size(); ++a) acc.subtree_visits[a] = static_cast<std::uint32_t>(visited[a].size());

  const KnownMap& map = state.map();
  for (std::size_t i = 0; i < acc.subtrees.size(); ++i) {
    auto& sa = acc.subtrees[i];
    const auto& s = adv.subtrees()[i];
    sa.second_explored.assign(sa.second.size(), 0);
    const auto first = sa.fresh.empty() ? kNoVertex : sa.fresh.front();
    bool any_stub = false;
    for (VertexId v : s.vertices) {
      if (map.is_stub(v)) any_stub = true;
      if (explorer[v] == kNoVertex) continue;
      ++sa.explored;
      if (meta[v].on_chain ? first != kNoVertex : explorer[v] == first) ++sa.first_attributed;
      if (meta[v].on_chain) continue;
      for (std::size_t j = 0; j < sa.second.size(); ++j) {
        if (explorer[v] == sa.second[j]) ++sa.second_explored[j];
      }
    }
    sa.fully_explored = s.hub1 != kNoVertex && map.is_explored(s.hub1) && !any_stub;
  }
  for (VertexId v = 1; v < meta.size() && v < map.id_bound(); ++v) {
    if (!map.is_stub(v)) continue;
    auto& sa = acc.subtrees[meta[v].branch];
    if (meta[v].depth < sa.shallowest_stub_depth ||
        (meta[v].depth == sa.shallowest_stub_depth && v < sa.shallowest_stub)) {
      sa.shallowest_stub_depth = meta[v].depth;
      sa.shallowest_stub = v;
    }
  }
  return acc;
}

std::string_view to_string(MClass m) {
  switch (m) {
    case MClass::M0: return "M0";
    case MClass::M1: return "M1";
    case MClass::M2: return "M2";
    case MClass::None: return "none";
  }
  return "?";
}

namespace {

bool has_case(const LbSubtree& s, LbCase c) { return std::find(s.cases.begin(), s.cases.end(), c) != s.cases.end(); }

std::string join_failures(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

}  // namespace

MPartition classify_m(const LowerBoundAdversary& adv, const LbAccount& acc) {
  MPartition out;
  for (std::size_t i = 0; i < acc.subtrees.size(); ++i) {
    const auto& sa = acc.subtrees[i];
    const auto& s = adv.subtrees()[i];
    const bool c2a = has_case(s, LbCase::Case2a);
    const bool c2bc = has_case(s, LbCase::Case2b) || has_case(s, LbCase::Case2c);
    bool all_positive = true;
    bool some_zero = false;
    for (AgentId a : sa.fresh) {
      if (acc.b_a[a] > 0) {
        continue;
      }
      all_positive = false;
      some_zero = true;
    }
    const bool m0 = all_positive || c2a;
    const bool m1 = !sa.fully_explored && some_zero && !c2a;
    const bool m2 = sa.fully_explored && c2bc;
    const int hits = int(m0) + int(m1) + int(m2);
    if (hits == 1) {
      out.cls.push_back(m0 ? MClass::M0 : m1 ? MClass::M1 : MClass::M2);
    } else {
      out.cls.push_back(MClass::None);
      out.errors.push_back("subtree " + std::to_string(i) + " matches " + std::to_string(hits) + " classes");
    }
  }
  return out;
}

CheckReport check_lemma3(const LowerBoundAdversary& adv, const Exploration& state, const LbAccount& acc) {
  const auto& p = adv.params();
  CheckReport rep;
  std::vector<std::string> bad;

  for (std::size_t a = 0; a < acc.b_a.size(); ++a) {
    if (acc.b_a[a] > p.budget - 3 * p.d1) bad.push_back("agent " + std::to_string(a) + " B_A=" + std::to_string(acc.b_a[a]));
  }
  rep.add("lemma3.1 B_A <= B - 3 d1", bad.empty(), join_failures(bad));

  bad.clear();
  for (std::size_t i = 0; i < acc.subtrees.size(); ++i) {
    const auto& s = adv.subtrees()[i];
    if (!(has_case(s, LbCase::Case2b) || has_case(s, LbCase::Case2c))) continue;
    AgentId a1 = acc.subtrees[i].fresh.front();
    if (acc.b_a[a1] != 0) bad.push_back("subtree " + std::to_string(i) + " first agent B_A=" + std::to_string(acc.b_a[a1]));
  }
  rep.add("lemma3.2 case 2b/2c implies B_A1 = 0", bad.empty(), join_failures(bad));

  bad.clear();
  for (std::size_t i = 0; i < acc.subtrees.size(); ++i) {
    const auto& sa = acc.subtrees[i];
    for (std::size_t j = 0; j < sa.second.size(); ++j) {
      std::int64_t ba = acc.b_a[sa.second[j]];
      if (2 * sa.second_explored[j] > ba + 4) {
        bad.push_back("subtree " + std::to_string(i) + " agent " + std::to_string(sa.second[j]) + " explored " +
                      std::to_string(sa.second_explored[j]) + " with B_A=" + std::to_string(ba));
      }
    }
  }
  rep.add("lemma3.3 second-tree agents explore <= B_A/2 + 2", bad.empty(), join_failures(bad));

  bad.clear();
  const std::int64_t cap4 = (p.budget + p.d2) / 2 - p.d1 + 2 * p.delta;
  for (std::size_t i = 0; i < acc.subtrees.size(); ++i) {
    const auto& sa = acc.subtrees[i];
    if (sa.fresh.empty()) continue;
    if (sa.first_attributed > cap4) {
      bad.push_back("subtree " + std::to_string(i) + " first agent explored " + std::to_string(sa.first_attributed) +
                    " > " + std::to_string(cap4));
    }
  }
  rep.add("lemma3.4 first agent explores <= (B+d2)/2 - d1 + 2 delta", bad.empty(), join_failures(bad));

  bad.clear();
  for (std::size_t i = 0; i < acc.subtrees.size(); ++i) {
    const auto& sa = acc.subtrees[i];
    const auto& s = adv.subtrees()[i];
    if (sa.fresh.size() > 1) continue;
    if (sa.explored >= s.budget) {
      bad.push_back("subtree " + std::to_string(i) + " explored " + std::to_string(sa.explored) + " >= N=" +
                    std::to_string(s.budget));
    }
  }
  rep.add("lemma3.5 at most one fresh agent implies |T_i| < N_i", bad.empty(), join_failures(bad));

  bad.clear();
  for (std::size_t i = 0; i < acc.subtrees.size(); ++i) {
    const auto& sa = acc.subtrees[i];
    const auto& s = adv.subtrees()[i];
    if (s.v1_passive || s.depleted) continue;
    if (sa.shallowest_stub == kNoVertex || sa.shallowest_stub_depth > p.d1 + p.delta) {
      bad.push_back("subtree " + std::to_string(i) + " has no unexplored vertex at depth <= d1 + delta");
    }
  }
  rep.add("lemma3.6 active undepleted subtree keeps a shallow unexplored vertex", bad.empty(), join_failures(bad));

  bad.clear();
  for (std::size_t i = 0; i < acc.subtrees.size(); ++i) {
    const auto& s = adv.subtrees()[i];
    if (s.nonleaf > s.budget) bad.push_back("subtree " + std::to_string(i) + " non-leaf count above budget");
    if (s.fresh != acc.subtrees[i].fresh || s.second != acc.subtrees[i].second) {
      bad.push_back("subtree " + std::to_string(i) + " agent sets differ between adversary and trace");
    }
  }
  for (std::size_t a = 0; a < acc.subtree_visits.size(); ++a) {
    if (acc.subtree_visits[a] > 2) bad.push_back("agent " + std::to_string(a) + " visited more than two subtrees");
    if (a < adv.agents().size() && adv.agents()[a].b_a != acc.b_a[a]) {
      bad.push_back("agent " + std::to_string(a) + " B_A differs between adversary and trace");
    }
  }
  for (const auto& v : adv.violations()) bad.push_back(v);
  (void)state;
  rep.add("construction invariants", bad.empty(), join_failures(bad));
  return rep;
}

CheckReport check_lemma4(const LowerBoundAdversary& adv, const LbAccount& acc, const MPartition& m) {
  const auto& p = adv.params();
  CheckReport rep;
  rep.add("lemma4.1 M0/M1/M2 partition", m.errors.empty(), join_failures(m.errors));

  const std::int64_t slope = p.budget - 3 * p.d1;
  std::vector<std::string> bad2, bad3, bad4, bad5;
  for (std::size_t i = 0; i < acc.subtrees.size(); ++i) {
    const auto& sa = acc.subtrees[i];
    std::int64_t sum2 = 0;
    for (AgentId a : sa.second) sum2 += acc.b_a[a];
    std::int64_t sum1 = 0;
    for (AgentId a : sa.fresh) sum1 += acc.b_a[a];
    const auto n1 = static_cast<std::int64_t>(sa.fresh.size());
    const std::string tag = "subtree " + std::to_string(i);

    // All sides doubled to stay integral.
    std::int64_t rhs2 = p.budget + p.d2 - 2 * p.d1 + 12 * p.delta + sum2;
    if (2 * sa.explored > rhs2) bad2.push_back(tag + ": 2|T_i|=" + std::to_string(2 * sa.explored) + " > " + std::to_string(rhs2));

    switch (m.cls[i]) {
      case MClass::M0: {
        std::int64_t rhs3 = p.budget + p.d2 - 2 * p.d1 + 8 * p.delta + (n1 - 2) * slope + sum2 - sum1;
        if (2 * sa.explored > rhs3) {
          bad3.push_back(tag + ": 2|T_i|=" + std::to_string(2 * sa.explored) + " > " + std::to_string(rhs3));
        }
        break;
      }
      case MClass::M1:
        if (sum1 > (n1 - 1) * slope) bad4.push_back(tag + ": sum B_A=" + std::to_string(sum1));
        break;
      case MClass::M2:
        if (sum1 > (n1 - 2) * slope) bad5.push_back(tag + ": sum B_A=" + std::to_string(sum1));
        break;
      case MClass::None:
        break;
    }
  }
  rep.add("lemma4.2 |T_i| general bound", bad2.empty(), join_failures(bad2));
  rep.add("lemma4.3 |T_i| bound on M0", bad3.empty(), join_failures(bad3));
  rep.add("lemma4.4 sum B_A bound on M1", bad4.empty(), join_failures(bad4));
  rep.add("lemma4.5 sum B_A bound on M2", bad5.empty(), join_failures(bad5));
  return rep;
}

// ---------------------------------------------------------------------------
// Finalization

namespace {

// Ports from the root to `target` in a normalized tree.
std::vector<Port> route_ports(const Tree& tree, VertexId target) {
  std::vector<Port> ports;
  for (VertexId v = target; v != tree.root(); v = tree.parent(v)) {
    auto ps = tree.ports(tree.parent(v));
    ports.push_back(static_cast<Port>(std::find(ps.begin(), ps.end(), v) - ps.begin()));
  }
  std::reverse(ports.begin(), ports.end());
  return ports;
}

}  // namespace

FinalizedReport finalize_lb(const LowerBoundAdversary& adv, const Exploration& state) {
  const auto& p = adv.params();
  const auto& meta = adv.vertices();
  FinalizedReport rep;
  LbAccount acc = account_lb_run(adv, state);
  rep.partition = classify_m(adv, acc);
  rep.lemma3 = check_lemma3(adv, state, acc);
  rep.lemma4 = check_lemma4(adv, acc, rep.partition);
  rep.alg_without_root = static_cast<std::int64_t>(state.explored_count()) - 1;

  std::optional<std::uint32_t> chosen;
  for (std::uint32_t i = 0; i < acc.subtrees.size(); ++i) {
    if (acc.subtrees[i].fresh.size() <= 1) {
      chosen = i;
      break;
    }
  }
  if (!chosen) throw std::logic_error("every subtree was entered by two or more fresh agents");
  rep.chosen_subtree = *chosen;
  for (const auto& sa : acc.subtrees) rep.t += sa.fully_explored ? 1 : 0;
  const auto& c = acc.subtrees[*chosen];
  if (c.shallowest_stub == kNoVertex) throw std::logic_error("chosen subtree has no unexplored vertex");
  rep.u1 = c.shallowest_stub;
  rep.u1_depth = c.shallowest_stub_depth;

  // Tree of everything revealed, plus the attached paths.
  std::vector<VertexId> parent(meta.size());
  for (VertexId v = 0; v < meta.size(); ++v) parent[v] = meta[v].parent;
  auto attach_path = [&](VertexId at) {
    VertexId prev = at;
    for (std::int64_t j = 0; j < p.budget; ++j) {
      parent.push_back(prev);
      prev = static_cast<VertexId>(parent.size() - 1);
    }
    return prev;
  };
  std::vector<VertexId> u1_paths;
  std::vector<std::pair<std::uint32_t, VertexId>> other_paths;
  rep.attach_points.assign(acc.subtrees.size(), kNoVertex);
  for (std::uint32_t i = 0; i < acc.subtrees.size(); ++i) {
    const auto& sa = acc.subtrees[i];
    if (sa.fully_explored || sa.shallowest_stub == kNoVertex) continue;
    rep.attach_points[i] = sa.shallowest_stub;
    if (i == *chosen) {
      for (std::int64_t j = 0; j < 2 * p.l - 1; ++j) u1_paths.push_back(attach_path(sa.shallowest_stub));
    } else {
      other_paths.emplace_back(i, attach_path(sa.shallowest_stub));
    }
  }
  rep.tree = tree_from_parents(parent);

  // One agent per unfinished subtree, the rest down distinct paths at u1.
  AgentId next = 0;
  std::size_t u1_next = 0;
  for (std::uint32_t i = 0; i < acc.subtrees.size(); ++i) {
    if (rep.attach_points[i] == kNoVertex) continue;
    if (i == *chosen) {
      rep.plan.push_back({next++, u1_paths[u1_next++]});
    } else {
      auto it = std::find_if(other_paths.begin(), other_paths.end(), [&](const auto& e) { return e.first == i; });
      rep.plan.push_back({next++, it->second});
    }
  }
  while (next < p.agents() && u1_next < u1_paths.size()) rep.plan.push_back({next++, u1_paths[u1_next++]});

  KnownTreeSource source(*rep.tree);
  Exploration replay(source, static_cast<std::uint32_t>(p.agents()), static_cast<std::uint32_t>(p.budget));
  for (const auto& route : rep.plan) {
    for (Port port : route_ports(*rep.tree, route.target)) {
      if (replay.agent(route.agent).energy == 0) break;
      replay.traverse(route.agent, port);
    }
  }
  rep.replay_explored = static_cast<std::int64_t>(replay.explored_count()) - 1;
  rep.opt_bound = opt_lb217(p.l, p.budget, p.d1, p.delta, rep.t);

  rep.bounds.add("t < l", rep.t < p.l, "t=" + std::to_string(rep.t));
  rep.bounds.add("u1 depth <= d1 + delta", rep.u1_depth <= p.d1 + p.delta,
                 "depth " + std::to_string(rep.u1_depth));
  rep.bounds.add("replayed plan reaches the OPT bound", rep.replay_explored >= rep.opt_bound,
                 std::to_string(rep.replay_explored) + " vs " + std::to_string(rep.opt_bound));
  const std::int64_t alg_cap2 = p.l * (p.budget + p.d2 + 12 * p.delta) + (p.l - 1 - rep.t) * (p.budget - 3 * p.d1);
  rep.bounds.add("ALG upper bound", 2 * rep.alg_without_root <= alg_cap2,
                 "2 ALG=" + std::to_string(2 * rep.alg_without_root) + " cap=" + std::to_string(alg_cap2));
  if (rep.t < p.l) {
    rep.guaranteed_ratio = finite_lb_ratio(p.l, p.budget, p.d1, p.d2, p.delta, rep.t);
    if (rep.alg_without_root > 0) {
      rep.measured_ratio = Rational(rep.opt_bound, rep.alg_without_root);
      rep.bounds.add("OPT bound / ALG >= guaranteed ratio", rep.measured_ratio >= rep.guaranteed_ratio,
                     rep.measured_ratio.str() + " vs " + rep.guaranteed_ratio.str());
    }
  }
  return rep;
}

std::string FinalizedReport::serialize(const LowerBoundAdversary& adv) const {
  const auto& p = adv.params();
  std::ostringstream out;
  out << "params l=" << p.l << " B=" << p.budget << " d1=" << p.d1 << " d2=" << p.d2 << " delta=" << p.delta << "\n";
  out << "t " << t << "\n";
  out << "alg " << alg_without_root << "\n";
  out << "opt_bound " << opt_bound << "\n";
  out << "opt_replay " << replay_explored << "\n";
  out << "ratio_measured " << measured_ratio.str() << "\n";
  out << "ratio_guaranteed " << guaranteed_ratio.str() << "\n";
  out << "u1 " << u1 << " depth " << u1_depth << " subtree " << chosen_subtree << "\n";
  for (std::size_t i = 0; i < adv.subtrees().size(); ++i) {
    const auto& s = adv.subtrees()[i];
    out << "subtree " << i << " class=" << to_string(partition.cls[i]) << " cases=";
    for (std::size_t j = 0; j < s.cases.size(); ++j) out << (j ? "," : "") << to_string(s.cases[j]);
    if (s.cases.empty()) out << "-";
    out << " fresh=";
    for (std::size_t j = 0; j < s.fresh.size(); ++j) out << (j ? "," : "") << s.fresh[j];
    if (s.fresh.empty()) out << "-";
    out << " second=";
    for (std::size_t j = 0; j < s.second.size(); ++j) out << (j ? "," : "") << s.second[j];
    if (s.second.empty()) out << "-";
    out << " N=" << s.budget << " nonleaf=" << s.nonleaf << " depleted=" << (s.depleted ? 1 : 0);
    out << " v2=" << (s.hub2 == kNoVertex ? std::string("-") : std::to_string(s.hub2)) << "\n";
  }
  for (const auto* r : {&lemma3, &lemma4, &bounds}) {
    for (const auto& line : r->lines) {
      out << "check " << (line.pass ? "pass" : "fail") << " " << line.name;
      if (!line.detail.empty()) out << " : " << line.detail;
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace treexp
