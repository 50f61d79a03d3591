#pragma once

// The myopic oracle policy and the circular (repeated-schedule) optimum for
// binary scenarios.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "nsaos/policies.hpp"

namespace nsaos {

/// Operator with the best immediate expected gain, uniformly random among
/// ties. Binary scenarios use the exact window gains; fixed and epoch
/// scenarios their current expectations.
OperatorId oracle_select(const ScenarioConfig& cfg, const WindowState& window, Rng& rng);

class OraclePolicy final : public Policy {
 public:
  std::string_view name() const override { return "OR"; }
  OperatorId select(const StepContext& ctx, Rng& rng) override {
    return oracle_select(ctx.scenario, ctx.window, rng);
  }
  void observe(const PolicyFeedback&) override {}
  std::unique_ptr<Policy> fresh() const override { return std::make_unique<OraclePolicy>(); }
};

/// Non-negative exact fraction, always in lowest terms.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// Value rounded half-up, and truncated, to `digits` decimals, scaled by
  /// 10^digits (e.g. 2/9 at 3 digits -> 222 both ways).
  std::int64_t rounded_scaled(int digits) const;
  std::int64_t truncated_scaled(int digits) const;

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// One period of a repeated schedule. Indices below n_one are "one"
/// operators; any other index is a zero-gain operator.
struct CircularSchedule {
  std::vector<OperatorId> ops;
  std::size_t wsize = 1;
  std::size_t n_one = 1;
  Rational total;          // gain of one period
  Rational per_iter_gain;  // total / ops.size()
};

/// Gain of one period when the schedule repeats forever: each "one" operator
/// at position t earns (wsize - Occ) / wsize, where Occ counts the same
/// operator over the wsize positions preceding t cyclically.
Rational circular_gain(std::span<const OperatorId> schedule, std::size_t wsize, std::size_t n_one);

/// Lowest common multiple of wsize and period length.
std::size_t computation_length(std::size_t wsize, std::size_t sc);

inline constexpr std::size_t kDefaultCircularCap = 16;

/// Best period of length `sc` for the scenario (n_op, n_one, wsize). All zero
/// operators are equivalent, so at most one is used. Exhaustive branch and
/// bound with rotation and relabelling symmetry removed. Throws
/// std::invalid_argument when sc is 0 or exceeds `cap`.
CircularSchedule solve_circular(std::size_t n_op, std::size_t n_one, std::size_t wsize,
                                std::size_t sc, std::size_t cap = kDefaultCircularCap);

struct Table1Cell {
  std::size_t wsize = 0;
  std::size_t comps = 0;
  Rational gain;
  std::optional<double> paper_gain;
  /// reference value equals the solver value rounded or truncated to 3 decimals
  bool match = true;
};

/// Published per-iteration gains for n_op = 2, n_one = 1, wsize 1..8,
/// period 2..15; nullopt outside that grid.
std::optional<double> published_table1(std::size_t wsize, std::size_t comps);

/// Solver grid for n_op = n_one + 1 over the inclusive ranges.
std::vector<Table1Cell> table1(std::size_t wsize_lo, std::size_t wsize_hi, std::size_t comps_lo,
                               std::size_t comps_hi, std::size_t n_one = 1,
                               std::size_t cap = kDefaultCircularCap);

}  // namespace nsaos
