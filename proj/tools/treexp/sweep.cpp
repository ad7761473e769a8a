#include <atomic>
#include <functional>
#include <thread>

#include "cli.hpp"
#include "treexp/generators.hpp"
#include "treexp/opt_oracle.hpp"

namespace treexp::cli {
namespace {

using Job = std::function<CsvRow()>;

std::vector<CsvRow> run_jobs(const std::vector<Job>& jobs, unsigned threads) {
  std::vector<CsvRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) rows[i] = jobs[i]();
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

CsvRow known_row(const std::string& family, const std::string& params, StrategyKind kind, std::uint64_t seed,
                 Metric metric, const Instance& inst, std::optional<std::int64_t> opt_excl) {
  RunResult run = run_on_tree(kind, inst, seed);
  CsvRow row;
  row.family = family;
  row.params = params;
  row.algo = std::string(to_string(kind));
  row.seed = seed;
  row.metric = metric;
  const bool incl = metric == Metric::WithRoot;
  const auto alg = static_cast<std::int64_t>(incl ? run.explored_with_root : run.explored_without_root);
  row.alg = std::to_string(alg);
  if (!opt_excl) {
    try {
      opt_excl = static_cast<std::int64_t>(opt_exact(inst)) - 1;
    } catch (const OracleGuardError&) {
    }
  }
  if (opt_excl) {
    const std::int64_t opt = *opt_excl + (incl ? 1 : 0);
    row.opt = std::to_string(opt);
    row.ratio = make_ratio(alg, opt, metric).str();
  } else {
    row.opt = "na";
    row.ratio = "na";
  }
  if (kind == StrategyKind::DivideExplore) row.lemma1 = check_lemma1(run, inst.tree, inst.budget).status;
  return row;
}

CsvRow lb_row(const LBParams& p, StrategyKind kind, std::uint64_t seed, Metric metric) {
  CsvRow row;
  row.family = "lb217";
  row.params = params_string({{"l", p.l}, {"B", p.budget}, {"d1", p.d1}, {"d2", p.d2}, {"delta", p.delta}});
  row.algo = std::string(to_string(kind));
  row.seed = seed;
  row.metric = metric;
  LbRun r = run_lb(kind, p, seed);
  const std::int64_t shift = metric == Metric::WithRoot ? 1 : 0;
  const std::int64_t alg = r.report.alg_without_root + shift;
  const std::int64_t opt = r.report.opt_bound + shift;
  row.alg = std::to_string(alg);
  row.opt = std::to_string(opt);
  row.ratio = make_ratio(alg, opt, metric).str();
  row.lemma3 = r.report.lemma3.status();
  row.lemma4 = r.report.lemma4.ok() && r.report.bounds.ok() ? CheckStatus::Pass : CheckStatus::Fail;
  return row;
}

CsvRow infeasible_row(const std::string& family, const std::string& params, StrategyKind kind, std::uint64_t seed,
                      Metric metric) {
  CsvRow row;
  row.family = family;
  row.params = params;
  row.algo = std::string(to_string(kind));
  row.seed = seed;
  row.metric = metric;
  row.alg = "infeasible";
  row.opt = "na";
  row.ratio = "na";
  return row;
}

}  // namespace

int cmd_sweep(const Globals& g, const SweepOptions& opt, std::ostream& out) {
  Metric metric;
  try {
    metric = parse_metric(opt.metric);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto algos = parse_algos(opt.algos);
  std::vector<Job> jobs;

  if (opt.family == "tightness") {
    for (std::size_t i = 0; i < opt.k.size(); ++i) {
      const std::uint32_t k = opt.k[i];
      // Without --d, pair every k with d = k.
      std::vector<std::uint32_t> ds = opt.d.empty() ? std::vector<std::uint32_t>{k} : opt.d;
      for (std::uint32_t d : ds) {
        const auto params = params_string({{"k", k}, {"d", d}});
        for (StrategyKind kind : algos) {
          jobs.push_back([=, &g] {
            try {
              return known_row("tightness", params, kind, g.seed, metric, gen_tightness(k, d),
                               static_cast<std::int64_t>(opt_tightness(k, d)));
            } catch (const std::invalid_argument&) {
              return infeasible_row("tightness", params, kind, g.seed, metric);
            }
          });
        }
      }
    }
  } else if (opt.family == "star") {
    for (std::uint32_t k : opt.k) {
      for (std::uint32_t b : opt.budget) {
        const auto params = params_string({{"k", k}, {"B", b}});
        for (StrategyKind kind : algos) {
          jobs.push_back([=, &g] {
            if (k == 0 || b == 0 || b % 2 != 0) return infeasible_row("star", params, kind, g.seed, metric);
            StarAdversary adv(k, b);
            Exploration state(adv, k, b);
            RunResult run = run_strategy(kind, state, g.seed);
            const std::int64_t shift = metric == Metric::WithRoot ? 1 : 0;
            CsvRow row;
            row.family = "star";
            row.params = params;
            row.algo = std::string(to_string(kind));
            row.seed = g.seed;
            row.metric = metric;
            const std::int64_t alg = static_cast<std::int64_t>(run.explored_without_root) + shift;
            const std::int64_t o = static_cast<std::int64_t>(opt_star(k, b)) + shift;
            row.alg = std::to_string(alg);
            row.opt = std::to_string(o);
            row.ratio = make_ratio(alg, o, metric).str();
            if (kind == StrategyKind::DivideExplore) row.lemma1 = check_lemma1(run, adv.finalize(), b).status;
            return row;
          });
        }
      }
    }
  } else if (opt.family == "random") {
    for (std::uint64_t i = 0; i < opt.count; ++i) {
      const std::uint64_t seed = g.seed + i;
      for (StrategyKind kind : algos) {
        jobs.push_back([=, &opt] {
          Instance inst = suite_instance(seed, opt.max_n, 3, 8);
          const auto params = params_string({{"n", inst.tree.size()}, {"k", inst.agents}, {"B", inst.budget}});
          return known_row("random", params, kind, seed, metric, inst, std::nullopt);
        });
      }
    }
  } else if (opt.family == "lb217") {
    for (std::uint32_t l : opt.l) {
      for (std::uint32_t b : opt.budget) {
        std::vector<std::int64_t> d1s = opt.d1.empty() ? std::vector<std::int64_t>{default_d1(b)} : opt.d1;
        for (std::int64_t d1 : d1s) {
          const auto params = params_string({{"l", l}, {"B", b}, {"d1", d1}});
          for (StrategyKind kind : algos) {
            jobs.push_back([=, &g] {
              try {
                return lb_row(lb_params(l, b, d1), kind, g.seed, metric);
              } catch (const InfeasibleParams&) {
                return infeasible_row("lb217", params, kind, g.seed, metric);
              }
            });
          }
        }
      }
    }
  } else {
    throw UsageError("unknown family '" + opt.family + "' (expected tightness, star, random or lb217)");
  }

  auto rows = run_jobs(jobs, opt.jobs);
  write_csv(g.csv_path, rows, out);
  bool ok = true;
  for (const auto& r : rows) {
    for (CheckStatus s : {r.lemma1, r.lemma3, r.lemma4}) ok = ok && s != CheckStatus::Fail;
  }
  return ok ? 0 : 1;
}

}  // namespace treexp::cli
