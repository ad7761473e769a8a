#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "treexp/generators.hpp"
#include "treexp/instance_io.hpp"
#include "treexp/opt_oracle.hpp"

namespace treexp::cli {
namespace {

// sscanf with a trailing %n so that partial matches are rejected.
bool match2(const std::string& s, const char* fmt, unsigned& a, unsigned& b) {
  int end = -1;
  std::string full = std::string(fmt) + "%n";
  return std::sscanf(s.c_str(), full.c_str(), &a, &b, &end) == 2 && end == static_cast<int>(s.size());
}

bool match1(const std::string& s, const char* fmt, unsigned& a) {
  int end = -1;
  std::string full = std::string(fmt) + "%n";
  return std::sscanf(s.c_str(), full.c_str(), &a, &end) == 1 && end == static_cast<int>(s.size());
}

}  // namespace

ResolvedInstance resolve_instance(const std::string& name, std::uint64_t seed) {
  unsigned a = 0;
  unsigned b = 0;
  try {
    if (match2(name, "tight_k%u_d%u", a, b)) {
      return {gen_tightness(a, b), "tightness", params_string({{"k", a}, {"d", b}}),
              static_cast<std::int64_t>(opt_tightness(a, b))};
    }
    if (match2(name, "star_k%u_B%u", a, b)) {
      return {gen_star_static(a, b), "star", params_string({{"k", a}, {"B", b}}),
              static_cast<std::int64_t>(opt_star(a, b))};
    }
    if (match2(name, "random_n%u_m%u", a, b) || (b = 0, match1(name, "random_n%u", a))) {
      Instance inst{gen_random(a, b, seed), 1, 0};
      return {inst, "random", params_string({{"n", a}, {"m", b}}), std::nullopt};
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(name + ": " + e.what());
  }
  try {
    return {read_instance_file(name), "file", name, std::nullopt};
  } catch (const TreeError& e) {
    throw UsageError(name + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
}

Instance suite_instance(std::uint64_t seed, std::uint32_t max_n, std::uint32_t max_k, std::uint32_t max_b) {
  std::mt19937_64 rng(seed);
  auto n = static_cast<std::uint32_t>(1 + uniform_below(rng, max_n));
  auto k = static_cast<std::uint32_t>(1 + uniform_below(rng, max_k));
  auto b = static_cast<std::uint32_t>(1 + uniform_below(rng, max_b));
  return Instance{gen_random(n, 0, rng()), k, b};
}

RunResult run_on_tree(StrategyKind kind, const Instance& instance, std::uint64_t seed) {
  KnownTreeSource source(instance.tree);
  Exploration state(source, instance.agents, instance.budget);
  return run_strategy(kind, state, seed);
}

LbRun run_lb(StrategyKind kind, const LBParams& params, std::uint64_t seed) {
  auto adv = std::make_unique<LowerBoundAdversary>(params);
  Exploration state(*adv, static_cast<std::uint32_t>(params.agents()), static_cast<std::uint32_t>(params.budget));
  RunResult run = run_strategy(kind, state, seed);
  FinalizedReport report = finalize_lb(*adv, state);
  return {std::move(adv), std::move(run), std::move(report)};
}

std::int64_t default_d1(std::int64_t budget) {
  const double target = lb_optimum().b1 * static_cast<double>(budget);
  std::int64_t best = budget % 4;
  for (std::int64_t d1 = budget % 4; d1 < budget; d1 += 4) {
    if (std::abs(static_cast<double>(d1) - target) < std::abs(static_cast<double>(best) - target)) best = d1;
  }
  return best;
}

std::vector<StrategyKind> parse_algos(const std::string& list) {
  if (list == "all") return {std::begin(kAllStrategies), std::end(kAllStrategies)};
  std::vector<StrategyKind> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parse_strategy(item));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty()) throw UsageError("no strategy given");
  return out;
}

std::string params_string(const std::vector<std::pair<std::string, std::int64_t>>& kv) {
  std::string out;
  for (const auto& [key, value] : kv) {
    if (!out.empty()) out += ';';
    out += key + "=" + std::to_string(value);
  }
  return out;
}

void write_csv(const std::string& path, const std::vector<CsvRow>& rows, std::ostream& fallback) {
  std::ostringstream text;
  text << kCsvHeader << "\n";
  for (const auto& r : rows) text << format_csv_row(r) << "\n";
  if (path.empty()) {
    fallback << text.str();
    return;
  }
  try {
    write_text_file(path, text.str());
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
}

}  // namespace treexp::cli
