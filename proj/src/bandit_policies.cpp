#include "nsaos/bandit_policies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nsaos/kernels.hpp"

namespace nsaos {

UcbState::UcbState(std::size_t n_op, double scale, bool normalized_gains, TieBreak ties)
    : tracker_(n_op, 1.0, UtilityMode::kEmpiricalMean),
      scale_(scale),
      normalized_(normalized_gains),
      ties_(ties) {
  if (!(scale >= 0.0)) throw std::invalid_argument("UCB scale must be >= 0");
}

double ucb_bonus(double total, double n) { return std::sqrt(2.0 * std::log(total) / n); }

std::vector<double> UcbState::scores() const {
  const auto nb = tracker_.counts();
  std::vector<double> counts(nb.size());
  std::transform(nb.begin(), nb.end(), counts.begin(),
                 [](std::uint64_t c) { return static_cast<double>(c); });
  std::vector<double> out(nb.size());
  const double two_log = 2.0 * std::log(static_cast<double>(tracker_.total_count()));
  kernels::ucb_scores(tracker_.utilities(), counts, two_log, scale_, out);
  return out;
}

OperatorId UcbState::select() const {
  const auto nb = tracker_.counts();
  for (std::size_t i = 0; i < nb.size(); ++i) {
    if (nb[i] == 0) return i;
  }
  return argmax_first(scores());
}

OperatorId UcbState::select(Rng& rng) const {
  if (ties_ == TieBreak::kLowest) return select();
  const auto nb = tracker_.counts();
  const auto unplayed = static_cast<std::size_t>(std::count(nb.begin(), nb.end(), 0));
  if (unplayed > 0) {
    std::size_t pick = unplayed == 1 ? 0 : rng.below(unplayed);
    for (std::size_t i = 0;; ++i) {
      if (nb[i] == 0 && pick-- == 0) return i;
    }
  }
  return argmax_random(scores(), rng);
}

void UcbState::observe(const PolicyFeedback& fb) {
  if (normalized_ && !(fb.gain >= 0.0 && fb.gain <= 1.0)) {
    throw std::invalid_argument("UCB expects gains in [0,1], got " + std::to_string(fb.gain));
  }
  tracker_.update(fb);
}

PageHinkleyStep ph_step(const PageHinkleyState& ph, double g) {
  PageHinkleyStep out{ph, false};
  PageHinkleyState& s = out.state;
  ++s.count;
  s.mean += (g - s.mean) / static_cast<double>(s.count);
  s.m += g - s.mean + s.delta;
  s.max_m = std::max(s.max_m, s.m);
  out.restart = s.enabled() && (s.max_m - s.m > s.gamma);
  return out;
}

DmabPolicy::DmabPolicy(std::size_t n_op, double gamma, double delta, double scale,
                       bool normalized_gains, TieBreak ties)
    : state_(n_op, scale, normalized_gains, ties) {
  if (!(gamma >= 0.0) || !(delta >= 0.0)) {
    throw std::invalid_argument("Page-Hinkley gamma and delta must be >= 0");
  }
  ph_.gamma = gamma;
  ph_.delta = delta;
}

void DmabPolicy::observe(const PolicyFeedback& fb) {
  state_.observe(fb);
  auto step = ph_step(ph_, fb.gain);
  ph_ = step.state;
  if (step.restart) {
    ++restarts_;
    state_.reset();
    ph_.reset();
  }
}

}  // namespace nsaos
