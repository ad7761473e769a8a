#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "treexp/analysis.hpp"
#include "treexp/engine.hpp"
#include "treexp/tree.hpp"

namespace treexp {

// ---------------------------------------------------------------------------
// Star adversary

/// Root of degree k + kB/2. The first kB/2 root children that agents step
/// into are leaves; later ones start rays that continue down to depth B.
class StarAdversary final : public TopologySource {
 public:
  StarAdversary(std::uint32_t k, std::uint32_t budget);

  VertexId root() const override { return 0; }
  std::vector<VertexId> reveal_root() override;
  std::vector<VertexId> reveal(const Exploration& state, const RevealRequest& request) override;

  std::uint32_t short_rays() const { return short_total_; }
  std::uint32_t long_rays() const { return k_; }
  std::uint32_t short_assigned() const { return short_used_; }
  std::uint32_t long_assigned() const { return long_used_; }

  /// The completed star consistent with every answer given so far.
  Tree finalize() const;

 private:
  enum class Ray : std::uint8_t { Unassigned, Short, Long };

  std::uint32_t k_;
  std::uint32_t budget_;
  std::uint32_t short_total_;
  std::uint32_t short_used_ = 0;
  std::uint32_t long_used_ = 0;
  std::vector<VertexId> parent_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::uint32_t> ray_of_;  // per vertex
  std::vector<Ray> ray_;               // per ray, ray r starts at vertex r + 1
  std::vector<VertexId> tail_;         // deepest vertex created on each ray
};

// ---------------------------------------------------------------------------
// Budgeted lower-bound adversary

struct LBParams {
  std::int64_t l = 0;
  std::int64_t budget = 0;
  std::int64_t d1 = 0;
  std::int64_t d2 = 0;
  std::int64_t delta = 0;

  std::int64_t agents() const { return 2 * l - 1; }
};

class InfeasibleParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// ceil(sqrt(2 l B)) + 2l.
std::int64_t lb_delta(std::int64_t l, std::int64_t budget);
/// Violated parameter constraints, empty when feasible.
std::vector<std::string> lb_violations(const LBParams& p);
/// d2 = (B - d1) / 2; throws InfeasibleParams listing every violation.
LBParams lb_params(std::int64_t l, std::int64_t budget, std::int64_t d1);

enum class LbCase : std::uint8_t { Case1, Case2a, Case2b, Case2c, Case3 };
std::string_view to_string(LbCase c);

enum class LbKind : std::uint8_t { Root, Skeleton, Hub1, Hub2, Adaptive };

struct LbVertex {
  VertexId parent = kNoVertex;
  std::uint32_t depth = 0;
  std::uint32_t branch = 0;
  LbKind kind = LbKind::Root;
  bool below_v2 = false;
  /// On the path from v1 to v2, attributed to the first fresh agent.
  bool on_chain = false;
};

enum class Regime : std::uint8_t { None, Case2b, Case2c };

struct LbSubtree {
  VertexId hub1 = kNoVertex;
  VertexId hub2 = kNoVertex;
  std::int64_t budget = 2;
  std::int64_t nonleaf = 0;
  bool depleted = false;
  bool v1_passive = false;
  bool v2_passive = false;
  Regime regime = Regime::None;
  /// Next vertex on the designated path toward a depth-d2 hub.
  VertexId designated = kNoVertex;
  std::vector<AgentId> fresh;   // first tree visited, in entry order
  std::vector<AgentId> second;  // second tree visited
  std::vector<LbCase> cases;
  std::vector<VertexId> vertices;  // everything created below the skeleton

  std::optional<AgentId> first() const {
    return fresh.empty() ? std::nullopt : std::optional<AgentId>(fresh.front());
  }
};

struct LbAgent {
  std::vector<std::uint32_t> subtrees;
  std::int64_t b_a = 0;
};

class LowerBoundAdversary final : public TopologySource {
 public:
  LowerBoundAdversary(const LBParams& params);

  VertexId root() const override { return 0; }
  std::vector<VertexId> reveal_root() override;
  void on_move(const Exploration& state, const MoveEvent& move) override;
  std::vector<VertexId> reveal(const Exploration& state, const RevealRequest& request) override;

  const LBParams& params() const { return params_; }
  const std::vector<LbVertex>& vertices() const { return v_; }
  const std::vector<LbSubtree>& subtrees() const { return sub_; }
  const std::vector<LbAgent>& agents() const { return agents_; }
  /// Events that contradict the construction (e.g. a third subtree entry).
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  VertexId make_vertex(VertexId parent, LbKind kind, std::uint32_t branch, bool below_v2);
  void enter(const Exploration& state, AgentId agent, std::uint32_t branch, std::uint32_t energy);
  void trigger_case2(const Exploration& state, std::uint32_t branch);
  bool stop_rule(const LbSubtree& s, const LbVertex& v, AgentId agent, std::uint32_t energy) const;
  void mark_chain(VertexId top);
  bool is_second(const LbSubtree& s, AgentId agent) const;

  LBParams params_;
  std::vector<LbVertex> v_;
  std::vector<LbSubtree> sub_;
  std::vector<LbAgent> agents_;
  std::vector<VertexId> explorer_;
  std::vector<std::string> violations_;
};

// ---------------------------------------------------------------------------
// Checks and finalization

struct CheckLine {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckLine> lines;
  bool ok() const;
  CheckStatus status() const { return ok() ? CheckStatus::Pass : CheckStatus::Fail; }
  void add(std::string name, bool pass, std::string detail = {});
};

/// Per-subtree quantities recomputed from the trace and vertex metadata.
struct SubtreeAccount {
  std::vector<AgentId> fresh;
  std::vector<AgentId> second;
  std::int64_t explored = 0;          // |T_i|, v1 included
  std::int64_t first_attributed = 0;  // explored by the first fresh agent, chain included
  std::vector<std::int64_t> second_explored;  // per agent in `second`
  bool fully_explored = false;
  std::uint32_t shallowest_stub_depth = UINT32_MAX;
  VertexId shallowest_stub = kNoVertex;
};

struct LbAccount {
  std::vector<SubtreeAccount> subtrees;
  std::vector<std::int64_t> b_a;  // per agent
  std::vector<std::uint32_t> subtree_visits;  // per agent
};

LbAccount account_lb_run(const LowerBoundAdversary& adv, const Exploration& state);

enum class MClass : std::uint8_t { M0, M1, M2, None };
std::string_view to_string(MClass m);

/// Membership of every subtree in M0, M1, M2. A subtree matching zero or
/// several definitions is reported as a partition failure.
struct MPartition {
  std::vector<MClass> cls;
  std::vector<std::string> errors;
};
MPartition classify_m(const LowerBoundAdversary& adv, const LbAccount& acc);

CheckReport check_lemma3(const LowerBoundAdversary& adv, const Exploration& state, const LbAccount& acc);
CheckReport check_lemma4(const LowerBoundAdversary& adv, const LbAccount& acc, const MPartition& m);

struct OptRoute {
  AgentId agent = 0;
  VertexId target = 0;  // far end of an attached path
};

struct FinalizedReport {
  std::int64_t t = 0;
  std::int64_t alg_without_root = 0;
  std::uint32_t chosen_subtree = 0;
  VertexId u1 = kNoVertex;
  std::uint32_t u1_depth = 0;
  std::vector<VertexId> attach_points;  // per subtree, kNoVertex if fully explored
  std::int64_t opt_bound = 0;
  std::int64_t replay_explored = 0;
  Rational measured_ratio;
  Rational guaranteed_ratio;
  std::vector<OptRoute> plan;
  MPartition partition;
  CheckReport lemma3;
  CheckReport lemma4;
  CheckReport bounds;  // replay, ALG upper bound, ratio
  std::optional<Tree> tree;

  std::string serialize(const LowerBoundAdversary& adv) const;
};

/// Completes the adversarial tree after a run: 2l-1 length-B paths at the
/// shallowest unexplored vertex of a subtree entered by at most one fresh
/// agent, one length-B path at the shallowest unexplored vertex of each
/// other unfinished subtree, leaves everywhere else. Replays the optimal
/// plan on the result and evaluates all lemma checks. Throws
/// std::logic_error when no subtree qualifies.
FinalizedReport finalize_lb(const LowerBoundAdversary& adv, const Exploration& state);

}  // namespace treexp
