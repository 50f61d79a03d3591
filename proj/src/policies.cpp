#include "nsaos/policies.hpp"

#include <algorithm>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "nsaos/kernels.hpp"

namespace nsaos {

UtilityTracker::UtilityTracker(std::size_t n_op, double alpha, UtilityMode mode)
    : u_(n_op, 0.0), sums_(n_op, 0.0), nb_(n_op, 0), alpha_(alpha), mode_(mode) {
  if (n_op == 0) throw std::invalid_argument("utility tracker needs at least one operator");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in [0,1]");
}

void UtilityTracker::update(const PolicyFeedback& fb) {
  if (fb.chosen >= u_.size()) throw std::out_of_range("feedback for unknown operator");
  const std::size_t i = fb.chosen;
  ++nb_[i];
  ++total_;
  if (mode_ == UtilityMode::kEmpiricalMean) {
    sums_[i] += fb.gain;
    u_[i] = sums_[i] / static_cast<double>(nb_[i]);
    return;
  }
  kernels::affine(u_, 0.0, 1.0 - alpha_, u_);
  u_[i] += alpha_ * fb.gain;
}

void UtilityTracker::reset() {
  std::fill(u_.begin(), u_.end(), 0.0);
  std::fill(sums_.begin(), sums_.end(), 0.0);
  std::fill(nb_.begin(), nb_.end(), 0);
  total_ = 0;
}

bool is_distribution(std::span<const double> sigma, double tol) {
  if (sigma.empty()) return false;
  double sum = 0.0;
  for (double s : sigma) {
    if (!(s >= 0.0)) return false;
    sum += s;
  }
  return std::abs(sum - 1.0) <= tol;
}

OperatorId roulette_pick(std::span<const double> sigma, double u) {
  if (!is_distribution(sigma)) {
    throw std::invalid_argument("roulette needs a normalized probability vector");
  }
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > 0.0) last_positive = i;
    cum += sigma[i];
    if (u < cum) return i;
  }
  // Sum fell short of u by rounding.
  return last_positive;
}

OperatorId roulette_draw(std::span<const double> sigma, Rng& rng) {
  return roulette_pick(sigma, rng.uniform());
}

OperatorId argmax_first(std::span<const double> values) {
  OperatorId best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

OperatorId argmax_random(std::span<const double> values, Rng& rng) {
  const OperatorId first = argmax_first(values);
  const double best = values[first];
  const auto ties = static_cast<std::size_t>(std::count(values.begin(), values.end(), best));
  if (ties == 1) return first;
  std::size_t pick = rng.below(ties);
  for (std::size_t i = first;; ++i) {
    if (values[i] == best && pick-- == 0) return i;
  }
}

OperatorId gr_select(const UtilityTracker& tracker) { return argmax_first(tracker.utilities()); }

OperatorId egr_select(const UtilityTracker& tracker, double eps, Rng& rng) {
  if (rng.uniform() < eps) return rng.below(tracker.n_op());
  return gr_select(tracker);
}

ProbabilityVector arw_update(const UtilityTracker& tracker, double p_min) {
  const std::size_t n = tracker.n_op();
  const double nd = static_cast<double>(n);
  if (!(p_min >= 0.0 && p_min * nd <= 1.0 + 1e-12)) {
    throw std::invalid_argument("p_min must lie in [0, 1/n], got " + std::to_string(p_min));
  }
  const auto u = tracker.utilities();
  const double total = std::accumulate(u.begin(), u.end(), 0.0);
  ProbabilityVector sigma(n, 1.0 / nd);
  if (total > 0.0) kernels::affine(u, p_min, (1.0 - nd * p_min) / total, sigma);
  return sigma;
}

ProbabilityVector ap_update(std::span<const double> sigma, const UtilityTracker& tracker,
                            double p_min, double beta) {
  const std::size_t n = sigma.size();
  const double p_max = 1.0 - static_cast<double>(n - 1) * p_min;
  const OperatorId best = argmax_first(tracker.utilities());
  ProbabilityVector next(sigma.begin(), sigma.end());
  for (std::size_t i = 0; i < n; ++i) {
    const double target = i == best ? p_max : p_min;
    next[i] = sigma[i] + beta * (target - sigma[i]);
  }
  return next;
}

EpsilonGreedyPolicy::EpsilonGreedyPolicy(std::size_t n_op, double eps, double alpha)
    : tracker_(n_op, alpha), eps_(eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must be in [0,1]");
}

AdaptiveRouletteWheelPolicy::AdaptiveRouletteWheelPolicy(std::size_t n_op, double p_min,
                                                         double alpha)
    : tracker_(n_op, alpha), sigma_(arw_update(tracker_, p_min)), p_min_(p_min) {}

void AdaptiveRouletteWheelPolicy::observe(const PolicyFeedback& fb) {
  tracker_.update(fb);
  sigma_ = arw_update(tracker_, p_min_);
}

AdaptivePursuitPolicy::AdaptivePursuitPolicy(std::size_t n_op, double p_min, double beta,
                                             double alpha)
    : tracker_(n_op, alpha),
      sigma_(n_op, 1.0 / static_cast<double>(n_op)),
      p_min_(p_min),
      beta_(beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must be in (0,1]");
  if (!(p_min >= 0.0 && p_min * static_cast<double>(n_op) <= 1.0 + 1e-12)) {
    throw std::invalid_argument("p_min must lie in [0, 1/n]");
  }
}

void AdaptivePursuitPolicy::observe(const PolicyFeedback& fb) {
  tracker_.update(fb);
  sigma_ = ap_update(sigma_, tracker_, p_min_, beta_);
}

}  // namespace nsaos
