#include "nsaos/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "nsaos/bandit_policies.hpp"
#include "nsaos/oracle_optimal.hpp"
#include "nsaos/stats.hpp"

namespace nsaos {

namespace {

struct NamedKind {
  std::string_view name;
  PolicyKind kind;
};

constexpr NamedKind kPolicyNames[] = {
    {"OR", PolicyKind::kOracle}, {"IM", PolicyKind::kIsland},    {"GR", PolicyKind::kGreedy},
    {"EGR", PolicyKind::kEpsGreedy}, {"U", PolicyKind::kUniform}, {"UCB", PolicyKind::kUcb},
    {"ARW", PolicyKind::kArw},   {"AP", PolicyKind::kAp},        {"DMAB", PolicyKind::kDmab},
};

}  // namespace

std::string_view policy_name(PolicyKind kind) {
  for (const auto& nk : kPolicyNames) {
    if (nk.kind == kind) return nk.name;
  }
  return "?";
}

PolicyKind parse_policy_kind(std::string_view name) {
  if (name == "MAB") return PolicyKind::kDmab;
  for (const auto& nk : kPolicyNames) {
    if (nk.name == name) return nk.kind;
  }
  throw std::invalid_argument("unknown policy '" + std::string(name) +
                              "' (expected OR, IM, GR, EGR, U, UCB, ARW, AP or DMAB)");
}

std::vector<PolicyKind> all_policy_kinds() {
  std::vector<PolicyKind> kinds;
  for (const auto& nk : kPolicyNames) kinds.push_back(nk.kind);
  return kinds;
}

PolicySpec PolicySpec::tuned(PolicyKind kind) {
  PolicySpec s;
  s.kind = kind;
  switch (kind) {
    case PolicyKind::kEpsGreedy:
      s.eps = 0.05;
      break;
    case PolicyKind::kArw:
      s.p_min = 0.05;
      break;
    case PolicyKind::kAp:
      s.beta = 0.7;
      s.p_min = 0.1;
      break;
    case PolicyKind::kIsland:
      s.alpha = 0.8;
      s.beta = 0.01;
      s.psize = 80;
      break;
    case PolicyKind::kUcb:
    case PolicyKind::kDmab:
      s.utility = UtilityMode::kEmpiricalMean;
      break;
    default:
      break;
  }
  return s;
}

void PolicySpec::validate(std::size_t n_op) const {
  auto fail = [this](const std::string& what) {
    throw std::invalid_argument(std::string(name()) + ": " + what);
  };
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  const double n = static_cast<double>(n_op);
  if (!unit(alpha)) fail("alpha must be in [0,1]");
  if (!unit(eps)) fail("eps must be in [0,1]");
  if (!(gamma >= 0.0)) fail("gamma must be >= 0");
  if (!(delta >= 0.0)) fail("delta must be >= 0");
  if (!(scale >= 0.0)) fail("scale must be >= 0");
  switch (kind) {
    case PolicyKind::kArw:
      if (!(p_min >= 0.0 && p_min * n <= 1.0 + 1e-12)) fail("p_min must be in [0, 1/nop]");
      break;
    case PolicyKind::kAp:
      if (!(beta > 0.0 && beta <= 1.0)) fail("beta must be in (0,1]");
      if (!(p_min >= 0.0 && p_min * n <= 1.0 + 1e-12)) fail("p_min must be in [0, 1/nop]");
      break;
    case PolicyKind::kIsland:
      if (!unit(beta)) fail("beta must be in [0,1]");
      if (psize < n_op) fail("psize must be at least nop");
      break;
    default:
      break;
  }
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, std::size_t n_op) {
  spec.validate(n_op);
  switch (spec.kind) {
    case PolicyKind::kOracle:
      return std::make_unique<OraclePolicy>();
    case PolicyKind::kGreedy:
      return std::make_unique<GreedyPolicy>(n_op, spec.alpha);
    case PolicyKind::kEpsGreedy:
      return std::make_unique<EpsilonGreedyPolicy>(n_op, spec.eps, spec.alpha);
    case PolicyKind::kUniform:
      return std::make_unique<UniformPolicy>(n_op);
    case PolicyKind::kArw:
      return std::make_unique<AdaptiveRouletteWheelPolicy>(n_op, spec.p_min, spec.alpha);
    case PolicyKind::kAp:
      return std::make_unique<AdaptivePursuitPolicy>(n_op, spec.p_min, spec.beta, spec.alpha);
    case PolicyKind::kUcb:
      return std::make_unique<UcbPolicy>(n_op, spec.scale, spec.normalized_gains, spec.ties);
    case PolicyKind::kDmab:
      return std::make_unique<DmabPolicy>(n_op, spec.gamma, spec.delta, spec.scale,
                                          spec.normalized_gains, spec.ties);
    case PolicyKind::kIsland:
      break;
  }
  throw std::invalid_argument("IM is a population policy; use run_island");
}

RunTrace run_trajectory(Policy& policy, const ScenarioConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  ScenarioConfig scenario = cfg;
  WindowState window(cfg.wsize, cfg.n_op());
  RunTrace trace;
  trace.operators.reserve(cfg.horizon);
  trace.gains.reserve(cfg.horizon);
  for (std::size_t t = 0; t < cfg.horizon; ++t) {
    if (scenario.kind == ScenarioKind::kEpoch) {
      auto adv = epoch_advance(scenario, t, rng);
      if (adv.applied) scenario = std::move(adv.config);
    }
    const StepContext ctx{scenario, window, t};
    const OperatorId op = policy.select(ctx, rng);
    const double g = gain(scenario, op, window, rng, t).value;
    window.push(op);
    policy.observe({op, g, t});
    trace.operators.push_back(op);
    trace.gains.push_back(g);
    trace.total += g;
  }
  return trace;
}

IslandPopulation run_island(const PolicySpec& spec, const ScenarioConfig& cfg, std::uint64_t seed) {
  spec.validate(cfg.n_op());
  Rng rng(seed);
  ScenarioConfig scenario = cfg;
  IslandPopulation pop =
      im_init(cfg.n_op(), spec.psize, spec.alpha, spec.beta, cfg.wsize, spec.credit);
  for (std::size_t t = 0; t < cfg.horizon; ++t) {
    if (scenario.kind == ScenarioKind::kEpoch) {
      auto adv = epoch_advance(scenario, t, rng);
      if (adv.applied) scenario = std::move(adv.config);
    }
    im_advance(pop, scenario, rng, t);
  }
  return pop;
}

void Protocol::validate() const {
  if (reps < 1) throw std::invalid_argument("protocol: reps must be >= 1");
  if (pool < 1) throw std::invalid_argument("protocol: pool must be >= 1");
  if (top < 1 || top > pool) throw std::invalid_argument("protocol: top must be in 1..pool");
}

std::uint64_t replicate_seed(const Protocol& protocol, std::size_t rep) {
  return derive_seed(protocol.master_seed, {rep});
}

std::uint64_t run_seed(std::uint64_t rep_seed, std::size_t run) {
  return derive_seed(rep_seed, {run});
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

namespace {

struct ReplicateValue {
  double top_mean = 0.0;
  double pool_mean = 0.0;
};

ReplicateValue run_replicate(const PolicySpec& spec, const ScenarioConfig& cfg,
                             const Protocol& protocol, std::uint64_t rep_seed) {
  std::vector<double> totals;
  if (spec.kind == PolicyKind::kIsland) {
    const IslandPopulation pop = run_island(spec, cfg, rep_seed);
    for (const auto& ind : pop.individuals) totals.push_back(ind.total);
  } else {
    const auto prototype = make_policy(spec, cfg.n_op());
    totals.reserve(protocol.pool);
    for (std::size_t run = 0; run < protocol.pool; ++run) {
      auto policy = prototype->fresh();
      totals.push_back(run_trajectory(*policy, cfg, run_seed(rep_seed, run)).total);
    }
  }
  return {top_k_mean(totals, protocol.top), mean(totals)};
}

ExperimentResult assemble(const PolicySpec& spec, const ScenarioConfig& cfg,
                          const Protocol& protocol, std::vector<ReplicateValue> values) {
  ExperimentResult r;
  r.policy = std::string(spec.name());
  r.n_one = cfg.n_one;
  r.wsize = cfg.wsize;
  for (std::size_t k = 0; k < values.size(); ++k) {
    r.replicate_values.push_back(values[k].top_mean);
    r.replicate_pool_means.push_back(values[k].pool_mean);
    r.seeds.push_back(replicate_seed(protocol, k));
  }
  r.mean = mean(r.replicate_values);
  r.std = sample_std(r.replicate_values);
  return r;
}

}  // namespace

ExperimentResult replicate_protocol(const PolicySpec& spec, const ScenarioConfig& cfg,
                                    const Protocol& protocol, std::size_t threads) {
  const PolicySpec one[] = {spec};
  const ScenarioConfig cell[] = {cfg};
  return sweep(one, cell, protocol, threads).front();
}

std::vector<ScenarioConfig> binary_grid(std::size_t n_op, std::span<const std::size_t> n_ones,
                                        std::span<const std::size_t> wsizes, std::size_t horizon) {
  std::vector<ScenarioConfig> cells;
  for (std::size_t n1 : n_ones) {
    for (std::size_t w : wsizes) cells.push_back(ScenarioConfig::binary(n_op, n1, w, horizon));
  }
  return cells;
}

std::vector<ExperimentResult> sweep(std::span<const PolicySpec> policies,
                                    std::span<const ScenarioConfig> cells,
                                    const Protocol& protocol, std::size_t threads) {
  protocol.validate();
  for (const auto& cfg : cells) {
    cfg.validate();
    for (const auto& spec : policies) {
      spec.validate(cfg.n_op());
      if (spec.kind == PolicyKind::kIsland && protocol.top > spec.psize) {
        throw std::invalid_argument("protocol: top exceeds IM psize");
      }
    }
  }
  const std::size_t n_jobs = cells.size() * policies.size();
  const std::size_t n_tasks = n_jobs * protocol.reps;
  std::vector<ReplicateValue> values(n_tasks);
  parallel_for(n_tasks, threads, [&](std::size_t task) {
    const std::size_t job = task / protocol.reps;
    const std::size_t rep = task % protocol.reps;
    const ScenarioConfig& cfg = cells[job / policies.size()];
    const PolicySpec& spec = policies[job % policies.size()];
    values[task] = run_replicate(spec, cfg, protocol, replicate_seed(protocol, rep));
  });

  std::vector<ExperimentResult> results;
  results.reserve(n_jobs);
  for (std::size_t job = 0; job < n_jobs; ++job) {
    std::vector<ReplicateValue> slice(values.begin() + static_cast<std::ptrdiff_t>(job * protocol.reps),
                                      values.begin() + static_cast<std::ptrdiff_t>((job + 1) * protocol.reps));
    results.push_back(assemble(policies[job % policies.size()], cells[job / policies.size()],
                               protocol, std::move(slice)));
  }
  return results;
}

std::vector<std::filesystem::path> write_csv_tables(const std::vector<ExperimentResult>& results,
                                                    const std::filesystem::path& dir) {
  std::map<std::size_t, std::vector<const ExperimentResult*>> by_wsize;
  for (const auto& r : results) by_wsize[r.wsize].push_back(&r);

  std::vector<std::filesystem::path> written;
  for (const auto& [w, rows] : by_wsize) {
    const auto path = dir / ("wsize_" + std::to_string(w) + ".csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "policy,N1,mean,std\n";
    char line[128];
    for (const auto* r : rows) {
      std::snprintf(line, sizeof line, "%s,%zu,%.2f,%.2f\n", r->policy.c_str(), r->n_one, r->mean,
                    r->std);
      out << line;
    }
    if (!out) throw std::runtime_error("cannot write " + path.string());
    written.push_back(path);
  }
  return written;
}

std::string summary_json(const std::vector<ExperimentResult>& results, const Protocol& protocol) {
  nlohmann::json j;
  j["protocol"] = {{"reps", protocol.reps},
                   {"pool", protocol.pool},
                   {"top", protocol.top},
                   {"master_seed", protocol.master_seed},
                   {"interpretation", kProtocolInterpretation},
                   {"seed_derivation", "run r of replicate k: derive_seed(derive_seed(master, {k}), {r})"}};
  auto& cells = j["results"] = nlohmann::json::array();
  for (const auto& r : results) {
    cells.push_back({{"policy", r.policy},
                     {"N1", r.n_one},
                     {"wsize", r.wsize},
                     {"mean", r.mean},
                     {"std", r.std},
                     {"replicate_values", r.replicate_values},
                     {"replicate_pool_means", r.replicate_pool_means},
                     {"seeds", r.seeds}});
  }
  return j.dump(2);
}

}  // namespace nsaos
