#include "nsaos/oracle_optimal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "nsaos/kernels.hpp"

namespace nsaos {

OperatorId oracle_select(const ScenarioConfig& cfg, const WindowState& window, Rng& rng) {
  const std::size_t n = cfg.n_op();
  std::array<double, 64> stack_buf;
  std::vector<double> heap_buf;
  std::span<double> expected;
  if (n <= stack_buf.size()) {
    expected = std::span<double>(stack_buf.data(), n);
  } else {
    heap_buf.resize(n);
    expected = heap_buf;
  }

  switch (cfg.kind) {
    case ScenarioKind::kBinary: {
      const auto gmax = cfg.max_gains();
      kernels::window_gains(gmax, window.counts(), static_cast<double>(cfg.wsize), expected);
      break;
    }
    case ScenarioKind::kFixed:
      for (std::size_t i = 0; i < n; ++i) expected[i] = cfg.operators[i].p * cfg.operators[i].g_max;
      break;
    case ScenarioKind::kEpoch:
      for (std::size_t i = 0; i < n; ++i) {
        const auto& iv = cfg.intervals[cfg.assignment[i]];
        expected[i] = 0.5 * (iv.lo + iv.hi);
      }
      break;
  }

  double best = expected[0];
  std::size_t ties = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (expected[i] > best) {
      best = expected[i];
      ties = 1;
    } else if (expected[i] == best) {
      ++ties;
    }
  }
  std::size_t pick = ties == 1 ? 0 : rng.below(ties);
  for (std::size_t i = 0; i < n; ++i) {
    if (expected[i] == best && pick-- == 0) return i;
  }
  return 0;
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num < 0) throw std::invalid_argument("Rational expects num >= 0, den > 0");
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

namespace {
std::int64_t pow10(int digits) {
  std::int64_t p = 1;
  for (int i = 0; i < digits; ++i) p *= 10;
  return p;
}
}  // namespace

std::int64_t Rational::rounded_scaled(int digits) const {
  const __int128 scaled2 = static_cast<__int128>(num_) * pow10(digits) * 2 + den_;
  return static_cast<std::int64_t>(scaled2 / (2 * static_cast<__int128>(den_)));
}

std::int64_t Rational::truncated_scaled(int digits) const {
  return static_cast<std::int64_t>(static_cast<__int128>(num_) * pow10(digits) / den_);
}

namespace {

/// Occurrences of schedule[t] among the wsize positions before t, cyclically.
std::size_t cyclic_occurrences(std::span<const OperatorId> x, std::size_t t, std::size_t wsize,
                               std::size_t per_period) {
  const std::size_t sc = x.size();
  std::size_t occ = (wsize / sc) * per_period;
  for (std::size_t k = 1; k <= wsize % sc; ++k) {
    occ += x[(t + sc - k) % sc] == x[t];
  }
  return occ;
}

}  // namespace

Rational circular_gain(std::span<const OperatorId> schedule, std::size_t wsize, std::size_t n_one) {
  if (schedule.empty()) throw std::invalid_argument("circular schedule must be non-empty");
  if (wsize == 0) throw std::invalid_argument("wsize must be >= 1");
  std::int64_t num = 0;
  for (std::size_t t = 0; t < schedule.size(); ++t) {
    if (schedule[t] >= n_one) continue;
    const auto per_period = static_cast<std::size_t>(
        std::count(schedule.begin(), schedule.end(), schedule[t]));
    num += static_cast<std::int64_t>(wsize) -
           static_cast<std::int64_t>(cyclic_occurrences(schedule, t, wsize, per_period));
  }
  return Rational(num, static_cast<std::int64_t>(wsize));
}

std::size_t computation_length(std::size_t wsize, std::size_t sc) { return std::lcm(wsize, sc); }

namespace {

class CircularSearch {
 public:
  CircularSearch(std::size_t n_one, bool has_zero, std::size_t wsize, std::size_t sc)
      : n_one_(n_one), has_zero_(has_zero), wsize_(wsize), sc_(sc), x_(sc, 0) {}

  void run() {
    // Any schedule containing a "one" operator can be rotated to start with
    // one and relabelled so that it is operator 0.
    x_[0] = 0;
    descend(1, 1, static_cast<std::int64_t>(wsize_));
  }

  const std::vector<OperatorId>& best() const { return best_; }
  std::int64_t best_num() const { return best_num_; }

 private:
  // Upper bound on the gain numerator contributed by a "one" placed at t:
  // only the already placed part of its window is known.
  std::int64_t placed_bound(std::size_t t) const {
    const std::size_t from = t >= wsize_ ? t - wsize_ : 0;
    std::size_t occ = 0;
    for (std::size_t k = from; k < t; ++k) occ += x_[k] == x_[t];
    return static_cast<std::int64_t>(wsize_ - occ);
  }

  void descend(std::size_t pos, std::size_t labels_used, std::int64_t bound_num) {
    const std::int64_t ceiling = static_cast<std::int64_t>(sc_ * wsize_);
    if (best_num_ == ceiling) return;
    const std::int64_t ub = bound_num + static_cast<std::int64_t>((sc_ - pos) * wsize_);
    if (ub <= best_num_) return;
    if (pos == sc_) {
      const Rational total = circular_gain(x_, wsize_, n_one_);
      const std::int64_t num = total.num() * (static_cast<std::int64_t>(wsize_) / total.den());
      if (num > best_num_) {
        best_num_ = num;
        best_ = x_;
      }
      return;
    }
    const std::size_t max_label = std::min(labels_used + 1, n_one_);
    for (std::size_t label = 0; label < max_label; ++label) {
      x_[pos] = label;
      descend(pos + 1, std::max(labels_used, label + 1), bound_num + placed_bound(pos));
    }
    if (has_zero_) {
      x_[pos] = n_one_;
      descend(pos + 1, labels_used, bound_num);
    }
  }

  std::size_t n_one_;
  bool has_zero_;
  std::size_t wsize_;
  std::size_t sc_;
  std::vector<OperatorId> x_;
  std::vector<OperatorId> best_;
  std::int64_t best_num_ = -1;
};

}  // namespace

CircularSchedule solve_circular(std::size_t n_op, std::size_t n_one, std::size_t wsize,
                                std::size_t sc, std::size_t cap) {
  if (sc == 0) throw std::invalid_argument("schedule length must be >= 1");
  if (sc > cap) {
    throw std::invalid_argument("schedule length " + std::to_string(sc) + " exceeds the cap of " +
                                std::to_string(cap) + "; raise the cap to search longer periods");
  }
  if (wsize == 0) throw std::invalid_argument("wsize must be >= 1");
  if (n_one > n_op) throw std::invalid_argument("n1 must not exceed nop");

  CircularSchedule out;
  out.wsize = wsize;
  out.n_one = n_one;
  const bool has_zero = n_op > n_one;
  if (n_one == 0) {
    out.ops.assign(sc, 0);
  } else {
    CircularSearch search(n_one, has_zero, wsize, sc);
    search.run();
    out.ops = search.best();
  }
  out.total = circular_gain(out.ops, wsize, n_one);
  out.per_iter_gain = Rational(out.total.num(), out.total.den() * static_cast<std::int64_t>(sc));
  return out;
}

std::optional<double> published_table1(std::size_t wsize, std::size_t comps) {
  static constexpr double kTable[8][14] = {
      {0.500, 0.333, 0.500, 0.400, 0.500, 0.428, 0.500, 0.333, 0.500, 0.454, 0.500, 0.461, 0.500, 0.400},
      {0.250, 0.333, 0.375, 0.300, 0.333, 0.357, 0.375, 0.333, 0.300, 0.363, 0.375, 0.346, 0.357, 0.333},
      {0.333, 0.222, 0.333, 0.333, 0.333, 0.286, 0.333, 0.333, 0.333, 0.333, 0.333, 0.333, 0.333, 0.333},
      {0.250, 0.250, 0.250, 0.300, 0.333, 0.321, 0.313, 0.278, 0.300, 0.318, 0.333, 0.326, 0.321, 0.300},
      {0.300, 0.267, 0.300, 0.240, 0.300, 0.314, 0.325, 0.311, 0.300, 0.273, 0.300, 0.308, 0.314, 0.320},
      {0.250, 0.222, 0.292, 0.267, 0.250, 0.286, 0.313, 0.315, 0.317, 0.303, 0.292, 0.269, 0.286, 0.300},
      {0.286, 0.238, 0.286, 0.257, 0.286, 0.035, 0.286, 0.302, 0.314, 0.312, 0.310, 0.297, 0.286, 0.267},
      {0.125, 0.250, 0.063, 0.275, 0.135, 0.268, 0.031, 0.278, 0.150, 0.307, 0.078, 0.308, 0.152, 0.292},
  };
  if (wsize < 1 || wsize > 8 || comps < 2 || comps > 15) return std::nullopt;
  return kTable[wsize - 1][comps - 2];
}

std::vector<Table1Cell> table1(std::size_t wsize_lo, std::size_t wsize_hi, std::size_t comps_lo,
                               std::size_t comps_hi, std::size_t n_one, std::size_t cap) {
  std::vector<Table1Cell> cells;
  for (std::size_t w = wsize_lo; w <= wsize_hi; ++w) {
    for (std::size_t c = comps_lo; c <= comps_hi; ++c) {
      Table1Cell cell;
      cell.wsize = w;
      cell.comps = c;
      cell.gain = solve_circular(n_one + 1, n_one, w, c, cap).per_iter_gain;
      if (n_one == 1) cell.paper_gain = published_table1(w, c);
      if (cell.paper_gain) {
        const auto ref_milli = static_cast<std::int64_t>(std::llround(*cell.paper_gain * 1000.0));
        cell.match = ref_milli == cell.gain.rounded_scaled(3) ||
                     ref_milli == cell.gain.truncated_scaled(3);
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace nsaos
