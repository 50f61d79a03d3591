#pragma once

// Trajectory execution and the replicate/selection protocol behind the
// policy-comparison tables.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nsaos/island_model.hpp"
#include "nsaos/policies.hpp"
#include "nsaos/scenario.hpp"

namespace nsaos {

enum class PolicyKind { kOracle, kIsland, kGreedy, kEpsGreedy, kUniform, kUcb, kArw, kAp, kDmab };

std::string_view policy_name(PolicyKind kind);
/// Case-sensitive short names: OR IM GR EGR U UCB ARW AP DMAB ("MAB" is
/// accepted for DMAB). Throws std::invalid_argument otherwise.
PolicyKind parse_policy_kind(std::string_view name);
/// Every policy, in the row order of the comparison tables.
std::vector<PolicyKind> all_policy_kinds();

/// Policy name plus parameters. `alpha` and `beta` are the utility weight and
/// the pursuit rate for the single-trajectory policies, and the inertia and
/// noise of the transition matrix for IM.
struct PolicySpec {
  PolicyKind kind = PolicyKind::kUniform;
  double alpha = 0.5;
  double beta = 0.0;
  double eps = 0.0;
  double p_min = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double scale = 1.0;
  bool normalized_gains = true;
  std::size_t psize = 80;
  UtilityMode utility = UtilityMode::kRecency;
  CreditRule credit = CreditRule::kMax;
  TieBreak ties = TieBreak::kLowest;  // UCB and DMAB

  /// Shipped defaults: EGR eps 0.05; ARW p_min 0.05; AP beta 0.7, p_min 0.1;
  /// IM alpha 0.8, beta 0.01, psize 80; DMAB gamma = delta = 0.
  static PolicySpec tuned(PolicyKind kind);
  std::string_view name() const { return policy_name(kind); }
  /// Throws std::invalid_argument naming the first parameter out of range.
  void validate(std::size_t n_op) const;

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

/// Single-trajectory policy for `spec`; IM is a population policy and throws.
std::unique_ptr<Policy> make_policy(const PolicySpec& spec, std::size_t n_op);

struct RunTrace {
  std::vector<OperatorId> operators;
  std::vector<double> gains;
  double total = 0.0;
};

/// Runs `policy` (in its initial state) for cfg.horizon iterations.
RunTrace run_trajectory(Policy& policy, const ScenarioConfig& cfg, std::uint64_t seed);

/// Runs an IM population of spec.psize individuals for cfg.horizon steps.
IslandPopulation run_island(const PolicySpec& spec, const ScenarioConfig& cfg, std::uint64_t seed);

struct Protocol {
  std::size_t reps = 20;
  std::size_t pool = 80;
  std::size_t top = 20;
  std::uint64_t master_seed = 42;

  void validate() const;
  friend bool operator==(const Protocol&, const Protocol&) = default;
};

/// Describes how a replicate value is formed; written into output metadata.
inline constexpr std::string_view kProtocolInterpretation =
    "per replicate: run `pool` independent trajectories (IM: one population of psize "
    "individuals) and average the `top` best totals; report mean and sample std over replicates";

struct ExperimentResult {
  std::string policy;
  std::size_t n_one = 0;
  std::size_t wsize = 0;
  double mean = 0.0;
  double std = 0.0;
  std::vector<double> replicate_values;
  /// Mean over every run of the replicate, before top selection.
  std::vector<double> replicate_pool_means;
  /// Seed of each replicate; run r of replicate k uses derive_seed(seeds[k], {r}).
  std::vector<std::uint64_t> seeds;
};

std::uint64_t replicate_seed(const Protocol& protocol, std::size_t rep);
std::uint64_t run_seed(std::uint64_t replicate_seed, std::size_t run);

/// `threads` == 0 uses the hardware concurrency. Results do not depend on it.
ExperimentResult replicate_protocol(const PolicySpec& spec, const ScenarioConfig& cfg,
                                    const Protocol& protocol, std::size_t threads = 1);

/// Binary scenarios for every (n1, wsize) pair, n1-major.
std::vector<ScenarioConfig> binary_grid(std::size_t n_op, std::span<const std::size_t> n_ones,
                                        std::span<const std::size_t> wsizes,
                                        std::size_t horizon = 1000);

/// Every policy on every scenario; results ordered scenario-major then policy.
std::vector<ExperimentResult> sweep(std::span<const PolicySpec> policies,
                                    std::span<const ScenarioConfig> cells,
                                    const Protocol& protocol, std::size_t threads = 1);

/// One CSV per wsize, named wsize_<w>.csv, header `policy,N1,mean,std`.
/// Returns the paths written. Throws std::runtime_error if a file cannot be written.
std::vector<std::filesystem::path> write_csv_tables(const std::vector<ExperimentResult>& results,
                                                    const std::filesystem::path& dir);

/// JSON audit record: protocol, interpretation, seeds and replicate values.
std::string summary_json(const std::vector<ExperimentResult>& results, const Protocol& protocol);

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware).
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace nsaos
