#include <cmath>
#include <cstdio>
#include <string>

#include "cli.hpp"
#include "nsaos/bandit_policies.hpp"
#include "nsaos/harness.hpp"
#include "nsaos/island_model.hpp"
#include "nsaos/policies.hpp"
#include "nsaos/rng.hpp"
#include "nsaos/scenario.hpp"

namespace nsaos::cli {

namespace {

constexpr std::uint64_t kSeed = 20240601;

std::string fmt(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

// Mean gain of "one" operators under uniformly random operator sequences
// should be 1 - 1/n_op for any window size.
CheckResult property1(std::size_t steps) {
  CheckResult r{"property1-one-gain", true, ""};
  const std::size_t n_op = 8;
  const double expected = 1.0 - 1.0 / n_op;
  double worst = 0.0;
  for (std::size_t w : {1, 4, 8}) {
    const auto cfg = ScenarioConfig::binary(n_op, n_op, w, steps);
    WindowState window(w, n_op);
    Rng rng(derive_seed(kSeed, {1, w}));
    double sum = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
      const OperatorId op = rng.below(n_op);
      sum += gain(cfg, op, window, rng, t).value;
      window.push(op);
    }
    const double rel = std::abs(sum / steps - expected) / expected;
    worst = std::max(worst, rel);
    if (rel > 0.01) r.passed = false;
  }
  r.detail = fmt("worst relative error %.4f (limit %.2f)", worst, 0.01);
  return r;
}

// Uniform policy total over T=1000 is 1000 (n1/8)(7/8) on average.
CheckResult property2(std::size_t runs) {
  CheckResult r{"property2-uniform-baseline", true, ""};
  double worst = 0.0;
  for (std::size_t n1 : {1, 4, 8}) {
    const auto cfg = ScenarioConfig::binary(8, n1, 4, 1000);
    const double expected = 1000.0 * expected_uniform_gain(cfg);
    UniformPolicy proto(8);
    double sum = 0.0;
    for (std::size_t k = 0; k < runs; ++k) {
      auto p = proto.fresh();
      sum += run_trajectory(*p, cfg, derive_seed(kSeed, {2, n1, k})).total;
    }
    const double rel = std::abs(sum / runs - expected) / expected;
    worst = std::max(worst, rel);
    if (rel > 0.02) r.passed = false;
  }
  r.detail = fmt("worst relative error %.4f (limit %.2f)", worst, 0.02);
  return r;
}

CheckResult greedy_closed_form() {
  CheckResult r{"greedy-closed-form", true, "GR total equals (wsize+1)/2 on all 64 cells"};
  for (std::size_t n1 = 1; n1 <= 8; ++n1) {
    for (std::size_t w = 1; w <= 8; ++w) {
      GreedyPolicy gr(8);
      const double total = run_trajectory(gr, ScenarioConfig::binary(8, n1, w), kSeed).total;
      if (std::abs(total - (w + 1) / 2.0) > 1e-9) {
        r.passed = false;
        r.detail = fmt("cell wsize=%.0f gives %.6f", static_cast<double>(w), total);
        return r;
      }
    }
  }
  return r;
}

CheckResult dmab_equals_ucb(bool quick) {
  CheckResult r{"dmab-ucb-equivalence", true, "identical operator sequences at gamma=delta=0"};
  const std::size_t step = quick ? 3 : 1;
  for (std::size_t n1 = 1; n1 <= 8; n1 += step) {
    for (std::size_t w = 1; w <= 8; w += step) {
      const auto cfg = ScenarioConfig::binary(8, n1, w);
      UcbPolicy ucb(8);
      DmabPolicy dmab(8, 0.0, 0.0);
      const auto a = run_trajectory(ucb, cfg, kSeed);
      const auto b = run_trajectory(dmab, cfg, kSeed);
      if (a.operators != b.operators) {
        r.passed = false;
        r.detail = fmt("sequences differ at n1=%.0f wsize=%.0f", static_cast<double>(n1),
                       static_cast<double>(w));
        return r;
      }
    }
  }
  return r;
}

// Probability vectors of ARW and AP, and IM transition rows, stay
// distributions under long random update streams.
CheckResult normalization(std::size_t updates, bool break_it) {
  CheckResult r{"probability-normalization", true, ""};
  Rng rng(derive_seed(kSeed, {5}));
  AdaptiveRouletteWheelPolicy arw(8, 0.05);
  AdaptivePursuitPolicy ap(8, 0.1, 0.7);
  double worst = 0.0;
  for (std::size_t t = 0; t < updates; ++t) {
    const PolicyFeedback fb{rng.below(8), rng.uniform(), t};
    arw.observe(fb);
    ap.observe(fb);
    for (const Policy* p : {static_cast<const Policy*>(&arw), static_cast<const Policy*>(&ap)}) {
      const auto sigma = p->probabilities();
      double s = 0.0;
      bool nonneg = true;
      for (double v : sigma) {
        s += v;
        nonneg = nonneg && v >= 0.0;
      }
      if (break_it) s *= 1.01;
      worst = std::max(worst, std::abs(s - 1.0));
      if (!nonneg || std::abs(s - 1.0) > kNormTolerance) r.passed = false;
    }
  }
  auto pop = im_init(8, 80, 0.8, 0.01, 4);
  const auto cfg = ScenarioConfig::binary(8, 3, 4, 200);
  for (std::size_t t = 0; t < 200; ++t) {
    im_advance(pop, cfg, rng, t);
    if (!pop.matrix.is_stochastic()) r.passed = false;
  }
  r.detail = fmt("max |sum - 1| = %.3g over %.0f updates (IM rows audited separately)", worst,
                 static_cast<double>(updates));
  return r;
}

}  // namespace

std::vector<CheckResult> run_self_checks(const ValidateOptions& opts) {
  const std::size_t div = opts.quick ? 10 : 1;
  const bool break_norm = opts.inject_fault && *opts.inject_fault == "normalization";
  std::vector<CheckResult> out;
  out.push_back(property1(1'000'000 / div));
  out.push_back(property2(10'000 / div));
  out.push_back(greedy_closed_form());
  out.push_back(dmab_equals_ucb(opts.quick));
  out.push_back(normalization(1'000'000 / div, break_norm));
  return out;
}

}  // namespace nsaos::cli
