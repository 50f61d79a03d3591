#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numeric>

#include "nsaos/harness.hpp"
#include "nsaos/policies.hpp"
#include "nsaos/rng.hpp"

using namespace nsaos;

namespace {

UtilityTracker tracker_with(std::initializer_list<double> gains_per_op) {
  // Empirical-mean tracker whose utilities equal the given values.
  UtilityTracker t(gains_per_op.size(), 1.0, UtilityMode::kEmpiricalMean);
  std::size_t i = 0;
  for (double g : gains_per_op) t.update({i++, g, 0});
  return t;
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST(Utility, RecencyExamples) {
  UtilityTracker t(2, 0.5);
  t.update({0, 1.0, 0});
  EXPECT_EQ(t.utilities()[0], 0.5);
  EXPECT_EQ(t.utilities()[1], 0.0);
  UtilityTracker m(3, 1.0);
  m.update({2, 0.3, 0});
  EXPECT_EQ(m.utilities()[2], 0.3);
}

TEST(Utility, RecencyDecaysUnchosen) {
  UtilityTracker t(2, 0.5);
  t.update({0, 1.0, 0});
  t.update({1, 1.0, 1});
  EXPECT_EQ(t.utilities()[0], 0.25);
  EXPECT_EQ(t.utilities()[1], 0.5);
  EXPECT_EQ(t.counts()[0], 1u);
  EXPECT_EQ(t.total_count(), 2u);
}

TEST(Utility, EmpiricalMean) {
  UtilityTracker t(2, 0.5, UtilityMode::kEmpiricalMean);
  t.update({0, 1.0, 0});
  t.update({0, 0.0, 1});
  EXPECT_EQ(t.utilities()[0], 0.5);
  EXPECT_EQ(t.utilities()[1], 0.0);
  EXPECT_EQ(t.counts()[0], 2u);
}

TEST(Roulette, Examples) {
  const std::vector<double> sigma{0.3, 0.7};
  EXPECT_EQ(roulette_pick(sigma, 0.25), 0u);
  EXPECT_EQ(roulette_pick(sigma, 0.31), 1u);
  const std::vector<double> unit{1, 0, 0, 0};
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(roulette_draw(unit, rng), 0u);
  EXPECT_THROW(roulette_pick(std::vector<double>{0.5, 0.6}, 0.1), std::invalid_argument);
}

TEST(Roulette, UniformFrequencies) {
  const std::vector<double> sigma(8, 0.125);
  Rng rng(2024);
  std::array<int, 8> hist{};
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) ++hist[roulette_draw(sigma, rng)];
  for (int h : hist) EXPECT_NEAR(static_cast<double>(h) / n, 0.125, 0.125 * 0.01);
}

TEST(Greedy, TieGoesToLowestIndex) {
  EXPECT_EQ(gr_select(UtilityTracker(5)), 0u);
  EXPECT_EQ(argmax_first(std::vector<double>{0.1, 0.4, 0.4}), 1u);
}

TEST(Greedy, ClosedFormTotals) {
  for (std::size_t w = 1; w <= 8; ++w) {
    GreedyPolicy gr(8);
    const auto trace = run_trajectory(gr, ScenarioConfig::binary(8, 3, w), 1);
    EXPECT_NEAR(trace.total, (w + 1) / 2.0, 1e-9) << "wsize " << w;
  }
}

TEST(EpsGreedy, Limits) {
  const auto t = tracker_with({0.1, 0.9, 0.2});
  Rng rng(3);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(egr_select(t, 0.0, rng), 1u);
  std::array<int, 3> hist{};
  for (int i = 0; i < 30000; ++i) ++hist[egr_select(t, 1.0, rng)];
  for (int h : hist) EXPECT_NEAR(h, 10000, 400);
}

TEST(ProbabilityMatching, Examples) {
  const auto sigma = arw_update(tracker_with({1, 0}), 0.05);
  EXPECT_NEAR(sigma[0], 0.95, 1e-12);
  EXPECT_NEAR(sigma[1], 0.05, 1e-12);
  for (double v : arw_update(tracker_with({0.4, 0.4, 0.4, 0.4}), 0.1)) EXPECT_NEAR(v, 0.25, 1e-12);
  for (double v : arw_update(UtilityTracker(4), 0.1)) EXPECT_EQ(v, 0.25);
  EXPECT_THROW(arw_update(UtilityTracker(4), 0.3), std::invalid_argument);
}

TEST(ProbabilityMatching, RaisingUtilityNeverLowersProbability) {
  Rng rng(8);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> u(5);
    for (double& x : u) x = rng.uniform();
    const std::size_t i = rng.below(5);
    const double bump = rng.uniform();
    UtilityTracker a(5, 1.0, UtilityMode::kEmpiricalMean), b(5, 1.0, UtilityMode::kEmpiricalMean);
    for (std::size_t k = 0; k < 5; ++k) {
      a.update({k, u[k], 0});
      b.update({k, k == i ? std::min(1.0, u[k] + bump) : u[k], 0});
    }
    ASSERT_GE(arw_update(b, 0.05)[i], arw_update(a, 0.05)[i] - 1e-15);
  }
}

TEST(Pursuit, LimitsAndFixedPoint) {
  const auto t = tracker_with({0.2, 0.8, 0.1, 0.0});
  const std::vector<double> start(4, 0.25);
  const double p_min = 0.1, p_max = 1 - 3 * p_min;
  const auto jumped = ap_update(start, t, p_min, 1.0);
  EXPECT_NEAR(jumped[1], p_max, 1e-12);
  EXPECT_NEAR(jumped[0], p_min, 1e-12);
  const auto again = ap_update(jumped, t, p_min, 0.7);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(again[i], jumped[i], 1e-15);
}

TEST(Pursuit, GeometricConvergence) {
  const double p_min = 0.1, beta = 0.7, p_max = 1 - 7 * p_min;
  const auto t = tracker_with({0.1, 0.2, 0.9, 0.3, 0.0, 0.5, 0.4, 0.6});
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> sigma(8);
    for (double& s : sigma) s = rng.uniform();
    const double total = sum(sigma);
    for (double& s : sigma) s /= total;
    for (int step = 1; step <= 60; ++step) {
      sigma = ap_update(sigma, t, p_min, beta);
      ASSERT_LT(std::abs(sigma[2] - p_max), std::pow(1 - beta, step) + 1e-15);
      ASSERT_TRUE(is_distribution(sigma));
    }
  }
}

TEST(Argmax, ScaleInvariance) {
  Rng rng(6);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> u(6);
    for (double& x : u) x = std::floor(rng.uniform() * 4) / 4;  // frequent ties
    const double c = 0.01 + 100 * rng.uniform();
    std::vector<double> scaled(u);
    for (double& x : scaled) x *= c;
    ASSERT_EQ(argmax_first(u), argmax_first(scaled));
  }
}

TEST(Normalization, AllPolicyVectorsOverManyUpdates) {
  Rng rng(10);
  AdaptiveRouletteWheelPolicy arw(8, 0.05);
  AdaptivePursuitPolicy ap(8, 0.1, 0.7);
  double worst = 0;
  for (std::size_t t = 0; t < 1'000'000; ++t) {
    const PolicyFeedback fb{rng.below(8), rng.uniform(), t};
    arw.observe(fb);
    ap.observe(fb);
    for (auto sigma : {arw.probabilities(), ap.probabilities()}) {
      worst = std::max(worst, std::abs(sum(sigma) - 1.0));
      ASSERT_GE(*std::min_element(sigma.begin(), sigma.end()), 0.0);
    }
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Uniform, NoStateAndFullSupport) {
  UniformPolicy u(4);
  const auto cfg = ScenarioConfig::binary(4, 1, 1, 4000);
  const auto trace = run_trajectory(u, cfg, 12);
  std::array<int, 4> hist{};
  for (auto op : trace.operators) ++hist[op];
  for (int h : hist) EXPECT_NEAR(h, 1000, 120);
}
