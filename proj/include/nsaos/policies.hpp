#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "nsaos/rng.hpp"
#include "nsaos/scenario.hpp"

namespace nsaos {

struct PolicyFeedback {
  OperatorId chosen = 0;
  double gain = 0.0;
  std::size_t iteration = 0;
};

/// What a policy may look at when choosing. Only the oracle reads it.
struct StepContext {
  const ScenarioConfig& scenario;
  const WindowState& window;
  std::size_t iteration = 0;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string_view name() const = 0;
  virtual OperatorId select(const StepContext& ctx, Rng& rng) = 0;
  virtual void observe(const PolicyFeedback& fb) = 0;
  /// A new instance with the same parameters in its initial state.
  virtual std::unique_ptr<Policy> fresh() const = 0;
  /// Current selection distribution, for policies that keep one.
  virtual std::span<const double> probabilities() const { return {}; }
};

enum class UtilityMode { kRecency, kEmpiricalMean };

/// How equal scores are resolved by the argmax-based selectors.
enum class TieBreak { kLowest, kRandom };

/// Per-operator utility estimate.
///
/// Recency mode applies u <- (1 - alpha) u + alpha g to every operator each
/// iteration, with g = 0 for the operators that were not chosen. Empirical
/// mean mode keeps u_i = (sum of gains of i) / nb_i and leaves the others
/// untouched.
class UtilityTracker {
 public:
  explicit UtilityTracker(std::size_t n_op, double alpha = 0.5,
                          UtilityMode mode = UtilityMode::kRecency);

  void update(const PolicyFeedback& fb);
  void reset();

  std::span<const double> utilities() const { return u_; }
  std::span<const std::uint64_t> counts() const { return nb_; }
  std::uint64_t total_count() const { return total_; }
  double alpha() const { return alpha_; }
  UtilityMode mode() const { return mode_; }
  std::size_t n_op() const { return u_.size(); }

 private:
  std::vector<double> u_;
  std::vector<double> sums_;
  std::vector<std::uint64_t> nb_;
  std::uint64_t total_ = 0;
  double alpha_;
  UtilityMode mode_;
};

using ProbabilityVector = std::vector<double>;

inline constexpr double kNormTolerance = 1e-9;

/// Non-negative entries summing to 1 within `tol`.
bool is_distribution(std::span<const double> sigma, double tol = kNormTolerance);

/// CDF inversion for a given draw u in [0,1): the first i with u < sigma_0 + ... + sigma_i.
/// Throws std::invalid_argument if sigma is not a distribution.
OperatorId roulette_pick(std::span<const double> sigma, double u);
OperatorId roulette_draw(std::span<const double> sigma, Rng& rng);

/// Lowest index among the maxima.
OperatorId argmax_first(std::span<const double> values);
/// Uniformly random index among the maxima; one draw only when they tie.
OperatorId argmax_random(std::span<const double> values, Rng& rng);

OperatorId gr_select(const UtilityTracker& tracker);
OperatorId egr_select(const UtilityTracker& tracker, double eps, Rng& rng);

/// Probability matching: sigma_i = p_min + (1 - n p_min) u_i / sum(u), uniform
/// when sum(u) == 0. Throws std::invalid_argument if p_min is outside [0, 1/n].
ProbabilityVector arw_update(const UtilityTracker& tracker, double p_min);

/// Adaptive pursuit step toward p_max = 1 - (n-1) p_min on the best operator
/// and p_min elsewhere, at rate beta.
ProbabilityVector ap_update(std::span<const double> sigma, const UtilityTracker& tracker,
                            double p_min, double beta);

class GreedyPolicy final : public Policy {
 public:
  explicit GreedyPolicy(std::size_t n_op, double alpha = 0.5) : tracker_(n_op, alpha) {}
  std::string_view name() const override { return "GR"; }
  OperatorId select(const StepContext&, Rng&) override { return gr_select(tracker_); }
  void observe(const PolicyFeedback& fb) override { tracker_.update(fb); }
  std::unique_ptr<Policy> fresh() const override {
    return std::make_unique<GreedyPolicy>(tracker_.n_op(), tracker_.alpha());
  }
  const UtilityTracker& tracker() const { return tracker_; }

 private:
  UtilityTracker tracker_;
};

class EpsilonGreedyPolicy final : public Policy {
 public:
  EpsilonGreedyPolicy(std::size_t n_op, double eps, double alpha = 0.5);
  std::string_view name() const override { return "EGR"; }
  OperatorId select(const StepContext&, Rng& rng) override {
    return egr_select(tracker_, eps_, rng);
  }
  void observe(const PolicyFeedback& fb) override { tracker_.update(fb); }
  std::unique_ptr<Policy> fresh() const override {
    return std::make_unique<EpsilonGreedyPolicy>(tracker_.n_op(), eps_, tracker_.alpha());
  }

 private:
  UtilityTracker tracker_;
  double eps_;
};

class UniformPolicy final : public Policy {
 public:
  explicit UniformPolicy(std::size_t n_op) : n_op_(n_op) {}
  std::string_view name() const override { return "U"; }
  OperatorId select(const StepContext&, Rng& rng) override { return rng.below(n_op_); }
  void observe(const PolicyFeedback&) override {}
  std::unique_ptr<Policy> fresh() const override {
    return std::make_unique<UniformPolicy>(n_op_);
  }

 private:
  std::size_t n_op_;
};

/// Adaptive roulette wheel (probability matching).
class AdaptiveRouletteWheelPolicy final : public Policy {
 public:
  AdaptiveRouletteWheelPolicy(std::size_t n_op, double p_min, double alpha = 0.5);
  std::string_view name() const override { return "ARW"; }
  OperatorId select(const StepContext&, Rng& rng) override { return roulette_draw(sigma_, rng); }
  void observe(const PolicyFeedback& fb) override;
  std::unique_ptr<Policy> fresh() const override {
    return std::make_unique<AdaptiveRouletteWheelPolicy>(tracker_.n_op(), p_min_,
                                                         tracker_.alpha());
  }
  std::span<const double> probabilities() const override { return sigma_; }

 private:
  UtilityTracker tracker_;
  ProbabilityVector sigma_;
  double p_min_;
};

class AdaptivePursuitPolicy final : public Policy {
 public:
  AdaptivePursuitPolicy(std::size_t n_op, double p_min, double beta, double alpha = 0.5);
  std::string_view name() const override { return "AP"; }
  OperatorId select(const StepContext&, Rng& rng) override { return roulette_draw(sigma_, rng); }
  void observe(const PolicyFeedback& fb) override;
  std::unique_ptr<Policy> fresh() const override {
    return std::make_unique<AdaptivePursuitPolicy>(tracker_.n_op(), p_min_, beta_,
                                                   tracker_.alpha());
  }
  std::span<const double> probabilities() const override { return sigma_; }

 private:
  UtilityTracker tracker_;
  ProbabilityVector sigma_;
  double p_min_;
  double beta_;
};

}  // namespace nsaos
