#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "nsaos/policies.hpp"

namespace nsaos {

/// UCB1 over empirical-mean utilities.
class UcbState {
 public:
  /// `normalized_gains` rejects observed gains outside [0,1]; clear it when a
  /// non-unit `scale` is used to cope with other gain ranges.
  explicit UcbState(std::size_t n_op, double scale = 1.0, bool normalized_gains = true,
                    TieBreak ties = TieBreak::kLowest);

  /// Unplayed operators first (lowest index), then argmax of
  /// u_i + scale * sqrt(2 ln(sum nb) / nb_i) with lowest-index ties.
  OperatorId select() const;
  /// As select(), but honours the tie-break mode; kLowest draws nothing.
  OperatorId select(Rng& rng) const;
  /// Throws std::invalid_argument for gains outside [0,1] when normalized_gains.
  void observe(const PolicyFeedback& fb);
  void reset() { tracker_.reset(); }

  /// UCB1 score vector; every operator must have been played at least once.
  std::vector<double> scores() const;

  const UtilityTracker& tracker() const { return tracker_; }
  double scale() const { return scale_; }
  bool normalized_gains() const { return normalized_; }
  TieBreak ties() const { return ties_; }

 private:
  UtilityTracker tracker_;
  double scale_;
  bool normalized_;
  TieBreak ties_;
};

/// sqrt(2 ln(total) / n): the UCB1 exploration bonus.
double ucb_bonus(double total, double n);

/// Page-Hinkley test for a drop in the mean of a stream:
///   m_t = sum_{i<=t} (g_i - mean_i + delta),  M_t = max_{i<=t} m_i,
/// restart when M_t - m_t > gamma. gamma == delta == 0 disables the test.
struct PageHinkleyState {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m = 0.0;
  double max_m = 0.0;
  double gamma = 0.0;
  double delta = 0.0;

  bool enabled() const { return !(gamma == 0.0 && delta == 0.0); }
  void reset() {
    count = 0;
    mean = 0.0;
    m = 0.0;
    max_m = 0.0;
  }
};

struct PageHinkleyStep {
  PageHinkleyState state;
  bool restart = false;
};

PageHinkleyStep ph_step(const PageHinkleyState& ph, double g);

class UcbPolicy final : public Policy {
 public:
  explicit UcbPolicy(std::size_t n_op, double scale = 1.0, bool normalized_gains = true,
                     TieBreak ties = TieBreak::kLowest)
      : state_(n_op, scale, normalized_gains, ties) {}
  std::string_view name() const override { return "UCB"; }
  OperatorId select(const StepContext&, Rng& rng) override { return state_.select(rng); }
  void observe(const PolicyFeedback& fb) override { state_.observe(fb); }
  std::unique_ptr<Policy> fresh() const override {
    return std::make_unique<UcbPolicy>(state_.tracker().n_op(), state_.scale(),
                                       state_.normalized_gains(), state_.ties());
  }
  const UcbState& state() const { return state_; }

 private:
  UcbState state_;
};

/// UCB1 with a Page-Hinkley test on the received gains; a detected change
/// resets every mean, count and the test itself.
class DmabPolicy final : public Policy {
 public:
  DmabPolicy(std::size_t n_op, double gamma, double delta, double scale = 1.0,
             bool normalized_gains = true, TieBreak ties = TieBreak::kLowest);
  std::string_view name() const override { return "DMAB"; }
  OperatorId select(const StepContext&, Rng& rng) override { return state_.select(rng); }
  void observe(const PolicyFeedback& fb) override;
  std::unique_ptr<Policy> fresh() const override {
    return std::make_unique<DmabPolicy>(state_.tracker().n_op(), ph_.gamma, ph_.delta,
                                        state_.scale(), state_.normalized_gains(),
                                        state_.ties());
  }

  std::size_t restarts() const { return restarts_; }
  const UcbState& state() const { return state_; }
  const PageHinkleyState& page_hinkley() const { return ph_; }

 private:
  UcbState state_;
  PageHinkleyState ph_;
  std::size_t restarts_ = 0;
};

}  // namespace nsaos
