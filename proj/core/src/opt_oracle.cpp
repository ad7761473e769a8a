#include "treexp/opt_oracle.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>
#include <vector>

namespace treexp {
namespace {

using Mask = std::uint64_t;

Mask bit(VertexId v) { return Mask{1} << v; }

void check_guard(const Instance& in, std::uint32_t max_n, std::uint32_t max_k, std::uint32_t max_b,
                 const char* who) {
  const auto n = in.tree.size();
  if (n > max_n || n > 64 || in.agents > max_k || in.budget > max_b) {
    throw OracleGuardError(std::string(who) + ": instance exceeds size guard (n=" + std::to_string(n) +
                           ", k=" + std::to_string(in.agents) + ", B=" + std::to_string(in.budget) + ")");
  }
}

class FeasibleSets {
 public:
  FeasibleSets(const Tree& tree, std::uint32_t budget) : tree_(tree), budget_(budget) {
    children_.resize(tree.size());
    for (VertexId v = 0; v < tree.size(); ++v) {
      for (Port p : tree.child_ports(v)) children_[v] |= bit(tree.neighbor(v, p));
    }
  }

  std::vector<Mask> maximal() {
    std::vector<VertexId> ext;
    for (Port p : tree_.child_ports(tree_.root())) ext.push_back(tree_.neighbor(tree_.root(), p));
    grow(bit(tree_.root()), 1, 0, ext, 0);
    std::sort(out_.begin(), out_.end(), [](Mask a, Mask b) {
      int ca = std::popcount(a);
      int cb = std::popcount(b);
      return ca != cb ? ca > cb : a < b;
    });
    out_.erase(std::unique(out_.begin(), out_.end()), out_.end());
    return out_;
  }

 private:
  std::int64_t cost(std::uint32_t size, std::uint32_t max_depth) const {
    return 2 * (static_cast<std::int64_t>(size) - 1) - max_depth;
  }

  // Each root-connected set is produced once: a vertex may only be added
  // from the extension list at or after position `from`.
  void grow(Mask set, std::uint32_t size, std::uint32_t max_depth, std::vector<VertexId>& ext, std::size_t from) {
    bool extended = false;
    for (std::size_t i = from; i < ext.size(); ++i) {
      VertexId v = ext[i];
      std::uint32_t d = std::max(max_depth, tree_.depth(v));
      if (cost(size + 1, d) > budget_) continue;
      extended = true;
      std::size_t mark = ext.size();
      for (Port p : tree_.child_ports(v)) ext.push_back(tree_.neighbor(v, p));
      grow(set | bit(v), size + 1, d, ext, i + 1);
      ext.resize(mark);
    }
    if (!extended && is_maximal(set, size, max_depth)) out_.push_back(set);
  }

  bool is_maximal(Mask set, std::uint32_t size, std::uint32_t max_depth) const {
    Mask frontier = 0;
    for (Mask rest = set; rest; rest &= rest - 1) frontier |= children_[std::countr_zero(rest)];
    frontier &= ~set;
    for (; frontier; frontier &= frontier - 1) {
      VertexId v = static_cast<VertexId>(std::countr_zero(frontier));
      if (cost(size + 1, std::max(max_depth, tree_.depth(v))) <= budget_) return false;
    }
    return true;
  }

  const Tree& tree_;
  std::int64_t budget_;
  std::vector<Mask> children_;
  std::vector<Mask> out_;
};

struct Search {
  const std::vector<Mask>& sets;
  std::uint32_t cap;
  std::uint32_t best = 0;

  void run(Mask covered, std::uint32_t agents_left, std::size_t from) {
    auto have = static_cast<std::uint32_t>(std::popcount(covered));
    best = std::max(best, have);
    if (agents_left == 0 || best >= cap) return;
    for (std::size_t i = from; i < sets.size(); ++i) {
      // Sets are sorted by size, so this bounds every remaining choice.
      auto bound = std::min<std::uint64_t>(cap, have + std::uint64_t{agents_left} * std::popcount(sets[i]));
      if (bound <= best) return;
      if ((sets[i] & ~covered) == 0) continue;
      run(covered | sets[i], agents_left - 1, i + 1);
      if (best >= cap) return;
    }
  }
};

}  // namespace

std::uint64_t walk_cost_min(const Tree& tree, std::span<const VertexId> set) {
  std::vector<char> in(tree.size(), 0);
  for (VertexId v : set) {
    if (v >= tree.size()) throw std::invalid_argument("vertex id out of range");
    in[v] = 1;
  }
  if (!in[tree.root()]) throw std::invalid_argument("vertex set must contain the root");
  std::uint64_t count = 0;
  std::uint32_t deepest = 0;
  for (VertexId v = 0; v < tree.size(); ++v) {
    if (!in[v]) continue;
    ++count;
    if (v != tree.root() && !in[tree.parent(v)]) throw std::invalid_argument("vertex set is not connected");
    deepest = std::max(deepest, tree.depth(v));
  }
  return 2 * (count - 1) - deepest;
}

std::uint32_t opt_exact(const Instance& instance, const OptLimits& limits) {
  check_guard(instance, limits.max_n, limits.max_agents, limits.max_budget, "opt_exact");
  FeasibleSets feasible(instance.tree, instance.budget);
  auto sets = feasible.maximal();
  Search search{sets, instance.tree.size()};
  search.run(bit(instance.tree.root()), instance.agents, 0);
  return search.best;
}

std::uint32_t opt_naive_walks(const Instance& instance, const NaiveLimits& limits) {
  check_guard(instance, limits.max_n, limits.max_agents, limits.max_budget, "opt_naive_walks");
  const Tree& tree = instance.tree;
  std::unordered_set<Mask> reachable;
  // Depth-first over all walks; every prefix is itself a walk.
  struct Frame {
    VertexId at;
    Mask seen;
    std::uint32_t steps;
  };
  std::vector<Frame> stack{{tree.root(), bit(tree.root()), 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    reachable.insert(f.seen);
    if (f.steps == instance.budget) continue;
    for (VertexId w : tree.ports(f.at)) stack.push_back({w, f.seen | bit(w), f.steps + 1});
  }
  std::vector<Mask> masks(reachable.begin(), reachable.end());
  std::sort(masks.begin(), masks.end());

  std::uint32_t best = 0;
  std::vector<std::size_t> pick(instance.agents, 0);
  // Odometer over all k-tuples of walk footprints.
  while (true) {
    Mask u = 0;
    for (auto i : pick) u |= masks[i];
    best = std::max(best, static_cast<std::uint32_t>(std::popcount(u)));
    std::size_t j = 0;
    while (j < pick.size() && ++pick[j] == masks.size()) pick[j++] = 0;
    if (j == pick.size()) break;
  }
  return best;
}

std::int64_t opt_lb217(std::int64_t l, std::int64_t budget, std::int64_t d1, std::int64_t delta, std::int64_t t) {
  return (l - t) * budget + (l - 1 + t) * (budget - d1 - delta);
}

}  // namespace treexp
