#pragma once

// Operator gain models: the sliding-window binary scenario, fixed binomial
// gains and epoch-permuted uniform gains, plus the restless-bandit state
// encoding of a window.
//
// Operators are indexed 0..n_op-1. In a binary scenario the "one" operators
// (p=1, g=1) occupy indices 0..n_one-1 and the "zero" operators (p=1, g=0)
// the rest.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "nsaos/rng.hpp"

namespace nsaos {

using OperatorId = std::size_t;

enum class ScenarioKind { kBinary, kFixed, kEpoch };

std::string_view to_string(ScenarioKind kind);
/// Accepts "binary", "fixed", "epoch"; throws std::invalid_argument otherwise.
ScenarioKind parse_scenario_kind(std::string_view text);

/// Success probability and maximal gain of one operator.
struct OperatorSpec {
  double p = 1.0;
  double g_max = 1.0;

  friend bool operator==(const OperatorSpec&, const OperatorSpec&) = default;
};

/// Support of an epoch gain distribution (uniform on [lo, hi]).
struct GainInterval {
  double lo = 0.0;
  double hi = 1.0;

  friend bool operator==(const GainInterval&, const GainInterval&) = default;
};

inline constexpr std::size_t kMaxWindow = 64;

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::kBinary;
  std::vector<OperatorSpec> operators;
  std::size_t n_one = 0;  // binary kind only
  std::size_t wsize = 1;
  std::size_t horizon = 1000;
  std::size_t epoch_len = 0;  // epoch kind only
  std::vector<GainInterval> intervals;   // epoch kind: the distribution table
  std::vector<std::size_t> assignment;   // epoch kind: operator -> interval index

  std::size_t n_op() const { return operators.size(); }

  static ScenarioConfig binary(std::size_t n_op, std::size_t n_one, std::size_t wsize,
                               std::size_t horizon = 1000);
  static ScenarioConfig fixed(std::vector<OperatorSpec> operators, std::size_t horizon = 1000,
                              std::size_t wsize = 1);
  /// Empty `intervals` selects the default table for `n_op` operators.
  static ScenarioConfig epoch(std::size_t n_op, std::size_t epoch_len,
                              std::vector<GainInterval> intervals = {},
                              std::size_t horizon = 1000, std::size_t wsize = 1);

  /// Placeholder overlapping intervals: operator k on [k/(2n), k/(2n) + 0.5].
  static std::vector<GainInterval> default_intervals(std::size_t n_op);

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;

  /// g_max per operator, in index order.
  std::vector<double> max_gains() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// The last `capacity` applied operators, oldest first, with per-operator
/// occurrence counts kept alongside so lookups are O(1).
class WindowState {
 public:
  WindowState(std::size_t capacity, std::size_t n_op);

  /// Throws std::out_of_range for an operator outside 0..n_op-1.
  void push(OperatorId op);
  WindowState pushed(OperatorId op) const {
    WindowState w = *this;
    w.push(op);
    return w;
  }

  std::size_t occurrences(OperatorId op) const { return op < counts_.size() ? counts_[op] : 0; }
  std::span<const std::uint32_t> counts() const { return counts_; }

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return ring_.size(); }
  std::size_t n_op() const { return counts_.size(); }
  bool full() const { return size_ == ring_.size(); }

  /// Operator applied `offset` steps back (1 = newest). offset in 1..size().
  OperatorId back(std::size_t offset) const;
  /// Buffer contents, oldest to newest.
  std::vector<OperatorId> contents() const;

 private:
  std::vector<OperatorId> ring_;
  std::vector<std::uint32_t> counts_;
  std::size_t head_ = 0;  // slot the next push writes
  std::size_t size_ = 0;
};

struct GainSample {
  double value = 0.0;
  OperatorId op = 0;
  std::size_t iteration = 0;
};

/// Gain of applying `op` now, given the trajectory's window. Binary kind is
/// deterministic; fixed and epoch kinds consume `rng`.
GainSample gain(const ScenarioConfig& cfg, OperatorId op, const WindowState& window, Rng& rng,
                std::size_t iteration = 0);

/// Per-iteration gain expectation of the uniform policy on a binary scenario,
/// (n_one / n_op) * (1 - 1 / n_op). Throws std::invalid_argument otherwise.
double expected_uniform_gain(const ScenarioConfig& cfg);

/// Window usage of `op` as a wsize-bit code: bit (i-1) is set iff `op` was
/// applied i steps back. Positions not yet filled count as "not applied".
std::uint64_t encode_state(const WindowState& window, OperatorId op);

/// Deterministic restless transition of an arm's code: played arms move to
/// Lshift(code)+1, unplayed arms to Lshift(code), truncated to wsize bits.
std::uint64_t next_state(std::uint64_t code, bool played, std::size_t wsize);

/// Reward of playing an arm from `code`: g_max * (1 - popcount(code)/wsize).
double state_reward(std::uint64_t code, std::size_t wsize, double g_max);

struct EpochAdvance {
  ScenarioConfig config;
  bool applied = false;
};

/// At an epoch boundary (t > 0, t % epoch_len == 0) re-assigns the gain
/// distributions by a uniformly drawn permutation. Anywhere else, or for a
/// non-epoch scenario, returns the config unchanged with applied == false.
EpochAdvance epoch_advance(const ScenarioConfig& cfg, std::size_t t, Rng& rng);

/// Re-assigns distributions: operator i takes the one operator perm[i] held.
ScenarioConfig apply_permutation(const ScenarioConfig& cfg, std::span<const std::size_t> perm);

}  // namespace nsaos
