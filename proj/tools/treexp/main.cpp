#include <cmath>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "treexp/generators.hpp"
#include "treexp/instance_io.hpp"
#include "treexp/opt_oracle.hpp"

using namespace treexp;
using namespace treexp::cli;

namespace {

void write_trace(const Globals& g, const Trace& trace) {
  if (g.trace_path.empty()) return;
  try {
    write_text_file(g.trace_path, format_trace(trace));
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
}

Metric metric_flag(const std::string& s) {
  try {
    return parse_metric(s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

struct GenOptions {
  std::string family;
  std::uint32_t k = 2;
  std::uint32_t d = 3;
  std::uint32_t budget = 4;
  std::uint32_t n = 10;
  std::uint32_t max_degree = 0;
  std::string out;
};

int cmd_gen(const Globals& g, const GenOptions& o) {
  Instance inst = [&] {
    try {
      if (o.family == "tightness") return gen_tightness(o.k, o.d);
      if (o.family == "star") return gen_star_static(o.k, o.budget);
      if (o.family == "random") return Instance{gen_random(o.n, o.max_degree, g.seed), o.k, o.budget};
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    throw UsageError("unknown family '" + o.family + "' (expected tightness, star or random)");
  }();
  const std::string text = serialize_instance(inst);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    try {
      write_text_file(o.out, text);
    } catch (const std::runtime_error& e) {
      throw UsageError(e.what());
    }
  }
  return 0;
}

struct RunOptions {
  std::string instance;
  std::string algo = "dnd";
  std::optional<std::uint32_t> k;
  std::optional<std::uint32_t> budget;
  std::string metric = "excl";
};

int cmd_run(const Globals& g, const RunOptions& o) {
  ResolvedInstance r = resolve_instance(o.instance, g.seed);
  if (o.k) r.instance.agents = *o.k;
  if (o.budget) r.instance.budget = *o.budget;
  if (r.instance.agents == 0) throw UsageError("need at least one agent");
  const Metric metric = metric_flag(o.metric);
  const StrategyKind kind = parse_algos(o.algo).front();
  const Instance& inst = r.instance;

  std::cout << "# run instance=" << o.instance << " algo=" << to_string(kind) << " k=" << inst.agents
            << " B=" << inst.budget << " metric=" << to_string(metric) << " seed=" << g.seed << "\n";
  RunResult run = run_on_tree(kind, inst, g.seed);
  write_trace(g, run.trace);

  const bool incl = metric == Metric::WithRoot;
  const auto alg = static_cast<std::int64_t>(incl ? run.explored_with_root : run.explored_without_root);
  std::optional<std::int64_t> opt_excl;
  // Closed forms only hold for the family's own k and B.
  if (!o.k && !o.budget) opt_excl = r.opt_excl;
  if (!opt_excl) {
    try {
      opt_excl = static_cast<std::int64_t>(opt_exact(inst)) - 1;
    } catch (const OracleGuardError&) {
    }
  }

  CsvRow row;
  row.family = r.family;
  row.params = params_string({{"k", inst.agents}, {"B", inst.budget}});
  if (r.family != "file") row.params = r.params + ";" + row.params;
  row.algo = std::string(to_string(kind));
  row.seed = g.seed;
  row.metric = metric;
  row.alg = std::to_string(alg);
  row.opt = "na";
  row.ratio = "na";
  std::cout << "alg=" << alg << "\n";
  std::cout << "fully_explored=" << (run.fully_explored ? 1 : 0) << "\n";
  if (opt_excl) {
    const std::int64_t opt = *opt_excl + (incl ? 1 : 0);
    auto ratio = make_ratio(alg, opt, metric);
    row.opt = std::to_string(opt);
    row.ratio = ratio.str();
    std::cout << "opt=" << opt << "\nratio=" << ratio.str() << "\n";
  }
  int code = 0;
  if (kind == StrategyKind::DivideExplore) {
    auto l1 = check_lemma1(run, inst.tree, inst.budget);
    row.lemma1 = l1.status;
    std::cout << "lemma1=" << to_string(l1.status);
    if (!l1.detail.empty()) std::cout << " (" << l1.detail << ")";
    std::cout << "\n";
    if (l1.status == CheckStatus::Fail) code = 1;
  }
  if (!g.csv_path.empty()) write_csv(g.csv_path, {row}, std::cout);
  return code;
}

struct AdversaryOptions {
  std::string family = "lb217";
  std::string algo = "dnd";
  std::uint32_t k = 2;
  std::uint32_t budget = 1024;
  std::uint32_t l = 2;
  std::optional<std::int64_t> d1;
  std::string metric = "excl";
};

int cmd_adversary(const Globals& g, const AdversaryOptions& o) {
  const StrategyKind kind = parse_algos(o.algo).front();
  const Metric metric = metric_flag(o.metric);
  const std::int64_t shift = metric == Metric::WithRoot ? 1 : 0;
  CsvRow row;
  row.family = o.family;
  row.algo = std::string(to_string(kind));
  row.seed = g.seed;
  row.metric = metric;

  int code = 0;
  if (o.family == "star") {
    if (o.budget == 0 || o.budget % 2 != 0 || o.k == 0) throw UsageError("star adversary needs k >= 1 and an even B >= 2");
    std::cout << "# adversary family=star algo=" << to_string(kind) << " k=" << o.k << " B=" << o.budget
              << " seed=" << g.seed << "\n";
    StarAdversary adv(o.k, o.budget);
    Exploration state(adv, o.k, o.budget);
    RunResult run = run_strategy(kind, state, g.seed);
    write_trace(g, run.trace);
    const std::int64_t alg = static_cast<std::int64_t>(run.explored_without_root) + shift;
    const std::int64_t opt = static_cast<std::int64_t>(opt_star(o.k, o.budget)) + shift;
    auto ratio = make_ratio(alg, opt, metric);
    std::cout << "alg=" << alg << "\nopt=" << opt << "\nratio=" << ratio.str() << "\n";
    std::cout << "short_rays_revealed=" << adv.short_assigned() << " long_rays_revealed=" << adv.long_assigned()
              << "\n";
    row.params = params_string({{"k", o.k}, {"B", o.budget}});
    row.alg = std::to_string(alg);
    row.opt = std::to_string(opt);
    row.ratio = ratio.str();
    if (kind == StrategyKind::DivideExplore) row.lemma1 = check_lemma1(run, adv.finalize(), o.budget).status;
  } else if (o.family == "lb217") {
    LBParams p;
    try {
      p = lb_params(o.l, o.budget, o.d1 ? *o.d1 : default_d1(o.budget));
    } catch (const InfeasibleParams& e) {
      throw UsageError(e.what());
    }
    std::cout << "# adversary family=lb217 algo=" << to_string(kind) << " l=" << p.l << " B=" << p.budget
              << " d1=" << p.d1 << " seed=" << g.seed << "\n";
    LbRun r = run_lb(kind, p, g.seed);
    write_trace(g, r.run.trace);
    std::cout << r.report.serialize(*r.adversary);
    row.params = params_string({{"l", p.l}, {"B", p.budget}, {"d1", p.d1}, {"d2", p.d2}, {"delta", p.delta}});
    row.alg = std::to_string(r.report.alg_without_root + shift);
    row.opt = std::to_string(r.report.opt_bound + shift);
    row.ratio = make_ratio(r.report.alg_without_root + shift, r.report.opt_bound + shift, metric).str();
    row.lemma3 = r.report.lemma3.status();
    row.lemma4 = r.report.lemma4.ok() && r.report.bounds.ok() ? CheckStatus::Pass : CheckStatus::Fail;
    if (row.lemma3 == CheckStatus::Fail || row.lemma4 == CheckStatus::Fail) code = 1;
  } else {
    throw UsageError("unknown adversary family '" + o.family + "' (expected star or lb217)");
  }
  if (!g.csv_path.empty()) write_csv(g.csv_path, {row}, std::cout);
  return code;
}

struct OptOptions {
  std::string instance;
  std::optional<std::uint32_t> k;
  std::optional<std::uint32_t> budget;
  bool naive = false;
  OptLimits limits;
};

int cmd_opt(const Globals& g, const OptOptions& o) {
  ResolvedInstance r = resolve_instance(o.instance, g.seed);
  if (o.k) r.instance.agents = *o.k;
  if (o.budget) r.instance.budget = *o.budget;
  std::uint32_t opt = 0;
  try {
    opt = o.naive ? opt_naive_walks(r.instance) : opt_exact(r.instance, o.limits);
  } catch (const OracleGuardError& e) {
    throw UsageError(e.what());
  }
  std::cout << "# opt instance=" << o.instance << " k=" << r.instance.agents << " B=" << r.instance.budget
            << " method=" << (o.naive ? "naive" : "exact") << "\n";
  std::cout << "opt_incl=" << opt << "\nopt_excl=" << opt - 1 << "\n";
  return 0;
}

struct LbOptions {
  std::uint32_t l = 2;
  std::uint32_t budget = 1024;
  std::optional<std::int64_t> d1;
  bool converge = false;
};

int cmd_lb(const LbOptions& o) {
  auto best = lb_optimum();
  std::cout << std::setprecision(9);
  std::cout << "b1_star=" << best.b1 << "\nlimit=" << best.value << "\n";
  if (o.converge) {
    for (int i = 5; i <= 9; ++i) {
      const std::int64_t l = std::int64_t{1} << i;
      const std::int64_t b = std::int64_t{1} << (2 * i);
      const auto d1 = 2 * static_cast<std::int64_t>(std::llround(best.b1 * static_cast<double>(b) / 2));
      auto v = finite_lb_ratio_min(l, b, d1, (b - d1) / 2, lb_delta(l, b));
      std::cout << "i=" << i << " l=" << l << " B=" << b << " d1=" << d1 << " ratio=" << v.to_double() << "\n";
    }
    return 0;
  }
  LBParams p;
  try {
    p = lb_params(o.l, o.budget, o.d1 ? *o.d1 : default_d1(o.budget));
  } catch (const InfeasibleParams& e) {
    throw UsageError(e.what());
  }
  std::cout << "l=" << p.l << " B=" << p.budget << " d1=" << p.d1 << " d2=" << p.d2 << " delta=" << p.delta << "\n";
  for (std::int64_t t = 0; t < p.l; ++t) {
    auto v = finite_lb_ratio(p.l, p.budget, p.d1, p.d2, p.delta, t);
    std::cout << "t=" << t << " ratio=" << v.str() << " (" << v.to_double() << ")\n";
  }
  auto m = finite_lb_ratio_min(p.l, p.budget, p.d1, p.d2, p.delta);
  std::cout << "min=" << m.str() << " (" << m.to_double() << ")\n";
  const double b1 = static_cast<double>(p.d1) / static_cast<double>(p.budget);
  if (b1 > 3.0 / 13.0 && b1 < 1.0 / 3.0) std::cout << "asymptotic(d1/B)=" << lb_ratio(b1) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for collaborative tree exploration with energy-budgeted agents"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "64-bit seed for every randomized step")->capture_default_str();
  app.add_option("--csv", g.csv_path, "Write CSV rows to this file");
  app.add_option("--trace", g.trace_path, "Write the move trace to this file");

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Emit a TREE v1 instance");
  gen_cmd->add_option("--family", gen.family, "tightness, star or random")->required();
  gen_cmd->add_option("-k,--agents", gen.k, "Number of agents")->capture_default_str();
  gen_cmd->add_option("-d,--depth", gen.d, "Short path length (tightness)")->capture_default_str();
  gen_cmd->add_option("-B,--budget", gen.budget, "Energy budget")->capture_default_str();
  gen_cmd->add_option("-n,--vertices", gen.n, "Vertex count (random)")->capture_default_str();
  gen_cmd->add_option("--max-degree", gen.max_degree, "Degree cap, 0 for none (random)")->capture_default_str();
  gen_cmd->add_option("-o,--out", gen.out, "Output file (default stdout)");

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a strategy on a known tree");
  run_cmd->add_option("--instance", run.instance, "TREE v1 file or builtin name")->required();
  run_cmd->add_option("--algo", run.algo, "dnd, ldfs, rdfs or greedy-nearest")->capture_default_str();
  run_cmd->add_option("-k,--agents", run.k, "Override the agent count");
  run_cmd->add_option("-B,--budget", run.budget, "Override the budget");
  run_cmd->add_option("--metric", run.metric, "incl or excl (root)")->capture_default_str();

  AdversaryOptions adv;
  auto* adv_cmd = app.add_subcommand("adversary", "Run a strategy against an adaptive adversary");
  adv_cmd->add_option("--family", adv.family, "star or lb217")->capture_default_str();
  adv_cmd->add_option("--algo", adv.algo, "dnd, ldfs, rdfs or greedy-nearest")->capture_default_str();
  adv_cmd->add_option("-k,--agents", adv.k, "Agents (star)")->capture_default_str();
  adv_cmd->add_option("-B,--budget", adv.budget, "Energy budget")->capture_default_str();
  adv_cmd->add_option("-l", adv.l, "Number of subtrees (lb217)")->capture_default_str();
  adv_cmd->add_option("--d1", adv.d1, "Depth of the first hub (lb217)");
  adv_cmd->add_option("--metric", adv.metric, "incl or excl (root)")->capture_default_str();

  OptOptions opt;
  auto* opt_cmd = app.add_subcommand("opt", "Compute the offline optimum");
  opt_cmd->add_option("--instance", opt.instance, "TREE v1 file or builtin name")->required();
  opt_cmd->add_option("-k,--agents", opt.k, "Override the agent count");
  opt_cmd->add_option("-B,--budget", opt.budget, "Override the budget");
  opt_cmd->add_flag("--naive", opt.naive, "Enumerate walks instead of vertex sets");
  opt_cmd->add_option("--max-n", opt.limits.max_n, "Size guard: vertices")->capture_default_str();
  opt_cmd->add_option("--max-agents", opt.limits.max_agents, "Size guard: agents")->capture_default_str();
  opt_cmd->add_option("--max-budget", opt.limits.max_budget, "Size guard: budget")->capture_default_str();

  std::string suite;
  std::uint64_t count = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Run a property suite");
  verify_cmd->add_option("--suite", suite, "oracle, lemma1, lemma3, lemma4, ratio3, tightness or lbnum")->required();
  verify_cmd->add_option("--count", count, "Random instances (0 = suite default)");

  LbOptions lb;
  auto* lb_cmd = app.add_subcommand("lb", "Evaluate the lower-bound formulas");
  lb_cmd->add_option("-l", lb.l, "Number of subtrees")->capture_default_str();
  lb_cmd->add_option("-B,--budget", lb.budget, "Energy budget")->capture_default_str();
  lb_cmd->add_option("--d1", lb.d1, "Depth of the first hub");
  lb_cmd->add_flag("--converge", lb.converge, "Print the finite ratio along l = 2^i, B = 4^i");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Emit one CSV row per configuration");
  sweep_cmd->add_option("--family", sweep.family, "tightness, star, random or lb217")->required();
  sweep_cmd->add_option("-k,--agents", sweep.k, "Agent counts")->delimiter(',');
  sweep_cmd->add_option("-d,--depth", sweep.d, "Short path lengths (tightness, default d = k)")->delimiter(',');
  sweep_cmd->add_option("-B,--budget", sweep.budget, "Budgets")->delimiter(',');
  sweep_cmd->add_option("-l", sweep.l, "Subtree counts (lb217)")->delimiter(',');
  sweep_cmd->add_option("--d1", sweep.d1, "Hub depths (lb217)")->delimiter(',');
  sweep_cmd->add_option("--algo", sweep.algos, "Comma-separated strategies or 'all'")->capture_default_str();
  sweep_cmd->add_option("--metric", sweep.metric, "incl or excl (root)")->capture_default_str();
  sweep_cmd->add_option("--count", sweep.count, "Random instances (random)")->capture_default_str();
  sweep_cmd->add_option("--max-n", sweep.max_n, "Largest random tree")->capture_default_str();
  sweep_cmd->add_option("--jobs", sweep.jobs, "Worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen_cmd) return cmd_gen(g, gen);
    if (*run_cmd) return cmd_run(g, run);
    if (*adv_cmd) return cmd_adversary(g, adv);
    if (*opt_cmd) return cmd_opt(g, opt);
    if (*verify_cmd) return cmd_verify(g, suite, count, std::cout);
    if (*lb_cmd) return cmd_lb(lb);
    if (*sweep_cmd) return cmd_sweep(g, sweep, std::cout);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
