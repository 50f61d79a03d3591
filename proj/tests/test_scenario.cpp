#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>

#include "nsaos/rng.hpp"
#include "nsaos/scenario.hpp"

using namespace nsaos;

namespace {

WindowState window_of(std::size_t cap, std::size_t n_op, std::initializer_list<OperatorId> ops) {
  WindowState w(cap, n_op);
  for (auto op : ops) w.push(op);
  return w;
}

}  // namespace

TEST(Window, PushAppendsAndEvicts) {
  EXPECT_EQ(window_of(2, 4, {1}).contents(), (std::vector<OperatorId>{1}));
  EXPECT_EQ(window_of(2, 4, {1, 2, 3}).contents(), (std::vector<OperatorId>{2, 3}));
  EXPECT_EQ(window_of(3, 4, {1, 1}).contents(), (std::vector<OperatorId>{1, 1}));
}

TEST(Window, RejectsUnknownOperator) {
  WindowState w(2, 3);
  EXPECT_THROW(w.push(3), std::out_of_range);
}

TEST(Window, Occurrences) {
  EXPECT_EQ(window_of(3, 3, {}).occurrences(1), 0u);
  EXPECT_EQ(window_of(3, 3, {1, 1, 2}).occurrences(1), 2u);
  EXPECT_EQ(window_of(3, 3, {2, 2, 2}).occurrences(1), 0u);
}

TEST(Window, CountsMatchBufferUnderRandomPushes) {
  Rng rng(7);
  for (std::size_t cap : {1, 2, 5, 8, 64}) {
    WindowState w(cap, 6);
    for (int t = 0; t < 500; ++t) {
      w.push(rng.below(6));
      ASSERT_EQ(w.size(), std::min<std::size_t>(t + 1, cap));
      const auto c = w.contents();
      std::size_t sum = 0;
      for (OperatorId op = 0; op < 6; ++op) {
        const auto direct = static_cast<std::size_t>(std::count(c.begin(), c.end(), op));
        ASSERT_EQ(w.occurrences(op), direct);
        sum += w.occurrences(op);
      }
      ASSERT_EQ(sum, w.size());
    }
  }
}

TEST(Gain, BinaryExamples) {
  const auto cfg = ScenarioConfig::binary(4, 2, 4);
  Rng rng(1);
  EXPECT_EQ(gain(cfg, 0, WindowState(4, 4), rng).value, 1.0);
  EXPECT_EQ(gain(cfg, 0, window_of(4, 4, {0, 2, 3}), rng).value, 0.75);
  EXPECT_EQ(gain(cfg, 1, window_of(4, 4, {1, 1, 1, 1}), rng).value, 0.0);
  EXPECT_EQ(gain(cfg, 3, WindowState(4, 4), rng).value, 0.0);
  EXPECT_EQ(gain(cfg, 2, window_of(4, 4, {0, 1}), rng).value, 0.0);
}

TEST(Gain, WarmupDividesByWindowSize) {
  // One earlier use in a window of 5 that is not yet full.
  const auto cfg = ScenarioConfig::binary(2, 1, 5);
  Rng rng(1);
  EXPECT_DOUBLE_EQ(gain(cfg, 0, window_of(5, 2, {0}), rng).value, 0.8);
}

TEST(Gain, DeterministicAndStrictlyDecreasing) {
  const std::size_t w = 6;
  const auto cfg = ScenarioConfig::binary(3, 1, w);
  Rng a(1), b(2);
  double prev = 2.0;
  WindowState win(w, 3);
  for (std::size_t k = 0; k <= w; ++k) {
    const double g = gain(cfg, 0, win, a).value;
    EXPECT_EQ(g, gain(cfg, 0, win, b).value);
    EXPECT_LT(g, prev);
    EXPECT_GE(g, 0.0);
    prev = g;
    win.push(0);
  }
}

TEST(Gain, FixedKindIsBernoulli) {
  const auto cfg = ScenarioConfig::fixed({{0.3, 0.8}, {1.0, 0.5}});
  Rng rng(11);
  WindowState w(1, 2);
  const int n = 200000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const double g = gain(cfg, 0, w, rng).value;
    ASSERT_TRUE(g == 0.0 || g == 0.8);
    hits += g > 0;
  }
  EXPECT_NEAR(static_cast<double>(hits) / n, 0.3, 0.005);
  EXPECT_EQ(gain(cfg, 1, w, rng).value, 0.5);
}

TEST(Gain, EpochDrawsFromAssignedInterval) {
  const auto cfg = ScenarioConfig::epoch(2, 10, {{0.0, 0.1}, {0.9, 1.0}});
  Rng rng(5);
  WindowState w(1, 2);
  for (int i = 0; i < 1000; ++i) {
    const double g0 = gain(cfg, 0, w, rng).value;
    const double g1 = gain(cfg, 1, w, rng).value;
    ASSERT_GE(g0, 0.0);
    ASSERT_LE(g0, 0.1);
    ASSERT_GE(g1, 0.9);
    ASSERT_LE(g1, 1.0);
  }
}

TEST(Scenario, UniformExpectation) {
  EXPECT_DOUBLE_EQ(expected_uniform_gain(ScenarioConfig::binary(8, 1, 3)), 7.0 / 64.0);
  EXPECT_DOUBLE_EQ(expected_uniform_gain(ScenarioConfig::binary(8, 8, 5)), 7.0 / 8.0);
  EXPECT_DOUBLE_EQ(expected_uniform_gain(ScenarioConfig::binary(1, 1, 1)), 0.0);
  EXPECT_THROW(expected_uniform_gain(ScenarioConfig::fixed({{0.5, 1.0}})), std::invalid_argument);
}

TEST(Scenario, ValidationRejectsBadConfigs) {
  EXPECT_THROW(ScenarioConfig::binary(3, 4, 2).validate(), std::invalid_argument);
  EXPECT_THROW(ScenarioConfig::binary(3, 1, 0).validate(), std::invalid_argument);
  EXPECT_THROW(ScenarioConfig::fixed({{1.5, 1.0}}).validate(), std::invalid_argument);
  EXPECT_NO_THROW(ScenarioConfig::binary(8, 8, 8).validate());
}

TEST(Scenario, BinaryRosterLayout) {
  const auto cfg = ScenarioConfig::binary(5, 2, 3);
  EXPECT_EQ(cfg.max_gains(), (std::vector<double>{1, 1, 0, 0, 0}));
}

TEST(StateEncoding, Examples) {
  // Operator 0 applied 1 and 4 steps back.
  EXPECT_EQ(encode_state(window_of(4, 3, {0, 1, 2, 0}), 0), 0b1001u);
  EXPECT_EQ(encode_state(window_of(4, 3, {1, 2, 1, 2}), 0), 0u);
  EXPECT_EQ(encode_state(window_of(4, 3, {0, 0, 0, 0}), 0), 15u);
}

TEST(StateEncoding, LshiftTransitionLaws) {
  Rng rng(3);
  for (std::size_t w : {1, 2, 3, 7, 16}) {
    WindowState win(w, 4);
    for (int t = 0; t < 300; ++t) {
      const OperatorId played = rng.below(4);
      std::array<std::uint64_t, 4> before{};
      for (OperatorId o = 0; o < 4; ++o) before[o] = encode_state(win, o);
      win.push(played);
      for (OperatorId o = 0; o < 4; ++o) {
        ASSERT_EQ(encode_state(win, o), next_state(before[o], o == played, w));
        ASSERT_EQ(static_cast<std::size_t>(std::popcount(encode_state(win, o))), win.occurrences(o));
      }
    }
  }
}

TEST(StateEncoding, RewardMatchesGain) {
  const auto cfg = ScenarioConfig::binary(3, 2, 4);
  const auto win = window_of(4, 3, {0, 1, 0, 2});
  Rng rng(1);
  for (OperatorId o = 0; o < 3; ++o) {
    EXPECT_DOUBLE_EQ(state_reward(encode_state(win, o), 4, cfg.operators[o].g_max),
                     gain(cfg, o, win, rng).value);
  }
}

TEST(Epoch, BoundaryRule) {
  const auto cfg = ScenarioConfig::epoch(4, 50);
  Rng rng(9);
  EXPECT_FALSE(epoch_advance(cfg, 49, rng).applied);
  EXPECT_FALSE(epoch_advance(cfg, 0, rng).applied);
  const auto adv = epoch_advance(cfg, 50, rng);
  EXPECT_TRUE(adv.applied);
  EXPECT_EQ(adv.config.n_op(), 4u);
  auto a = adv.config.assignment;
  std::sort(a.begin(), a.end());
  EXPECT_EQ(a, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_FALSE(epoch_advance(ScenarioConfig::binary(4, 1, 2), 50, rng).applied);
}

TEST(Epoch, Permutations) {
  const auto cfg = ScenarioConfig::epoch(2, 10, {{0.0, 0.2}, {0.5, 0.9}});
  const std::vector<std::size_t> swap{1, 0}, id{0, 1};
  const auto swapped = apply_permutation(cfg, swap);
  EXPECT_EQ(swapped.intervals[swapped.assignment[0]], cfg.intervals[cfg.assignment[1]]);
  EXPECT_EQ(swapped.intervals[swapped.assignment[1]], cfg.intervals[cfg.assignment[0]]);
  EXPECT_EQ(apply_permutation(cfg, id), cfg);
}

TEST(Rng, DeriveSeedIsStableAndPathSensitive) {
  EXPECT_EQ(derive_seed(42, {1, 2}), derive_seed(42, {1, 2}));
  EXPECT_NE(derive_seed(42, {1, 2}), derive_seed(42, {2, 1}));
  EXPECT_NE(derive_seed(42, {1}), derive_seed(43, {1}));
}

TEST(Rng, BelowStaysInRange) {
  Rng rng(5);
  std::array<int, 7> hist{};
  for (int i = 0; i < 70000; ++i) {
    const auto x = rng.below(7);
    ASSERT_LT(x, 7u);
    ++hist[x];
  }
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}
