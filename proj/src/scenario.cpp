#include "nsaos/scenario.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nsaos {

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kBinary:
      return "binary";
    case ScenarioKind::kFixed:
      return "fixed";
    case ScenarioKind::kEpoch:
      return "epoch";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view text) {
  if (text == "binary") return ScenarioKind::kBinary;
  if (text == "fixed") return ScenarioKind::kFixed;
  if (text == "epoch") return ScenarioKind::kEpoch;
  throw std::invalid_argument("unknown scenario kind '" + std::string(text) +
                              "' (expected binary, fixed or epoch)");
}

ScenarioConfig ScenarioConfig::binary(std::size_t n_op, std::size_t n_one, std::size_t wsize,
                                      std::size_t horizon) {
  ScenarioConfig cfg;
  cfg.kind = ScenarioKind::kBinary;
  cfg.n_one = n_one;
  cfg.wsize = wsize;
  cfg.horizon = horizon;
  cfg.operators.assign(n_op, OperatorSpec{1.0, 0.0});
  for (std::size_t i = 0; i < std::min(n_one, n_op); ++i) cfg.operators[i].g_max = 1.0;
  cfg.validate();
  return cfg;
}

ScenarioConfig ScenarioConfig::fixed(std::vector<OperatorSpec> operators, std::size_t horizon,
                                     std::size_t wsize) {
  ScenarioConfig cfg;
  cfg.kind = ScenarioKind::kFixed;
  cfg.operators = std::move(operators);
  cfg.horizon = horizon;
  cfg.wsize = wsize;
  cfg.validate();
  return cfg;
}

std::vector<GainInterval> ScenarioConfig::default_intervals(std::size_t n_op) {
  std::vector<GainInterval> out(n_op);
  for (std::size_t k = 0; k < n_op; ++k) {
    const double lo = static_cast<double>(k) / (2.0 * static_cast<double>(n_op));
    out[k] = {lo, lo + 0.5};
  }
  return out;
}

ScenarioConfig ScenarioConfig::epoch(std::size_t n_op, std::size_t epoch_len,
                                     std::vector<GainInterval> intervals, std::size_t horizon,
                                     std::size_t wsize) {
  ScenarioConfig cfg;
  cfg.kind = ScenarioKind::kEpoch;
  cfg.epoch_len = epoch_len;
  cfg.horizon = horizon;
  cfg.wsize = wsize;
  cfg.intervals = intervals.empty() ? default_intervals(n_op) : std::move(intervals);
  cfg.operators.resize(n_op);
  cfg.assignment.resize(n_op);
  std::iota(cfg.assignment.begin(), cfg.assignment.end(), std::size_t{0});
  for (std::size_t i = 0; i < n_op && i < cfg.intervals.size(); ++i) {
    cfg.operators[i] = {1.0, cfg.intervals[i].hi};
  }
  cfg.validate();
  return cfg;
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (operators.empty()) fail("scenario needs at least one operator");
  if (wsize < 1 || wsize > kMaxWindow) {
    fail("wsize must be in 1.." + std::to_string(kMaxWindow) + ", got " + std::to_string(wsize));
  }
  for (std::size_t i = 0; i < operators.size(); ++i) {
    const auto& o = operators[i];
    if (!(o.p >= 0.0 && o.p <= 1.0)) fail("operator " + std::to_string(i) + ": p outside [0,1]");
    if (!(o.g_max >= 0.0 && o.g_max <= 1.0)) {
      fail("operator " + std::to_string(i) + ": g_max outside [0,1]");
    }
  }
  switch (kind) {
    case ScenarioKind::kBinary:
      if (n_one > operators.size()) fail("n1 must not exceed nop");
      for (std::size_t i = 0; i < operators.size(); ++i) {
        const OperatorSpec expect{1.0, i < n_one ? 1.0 : 0.0};
        if (operators[i] != expect) fail("binary scenario operators must be (1,1)*n1 then (1,0)");
      }
      break;
    case ScenarioKind::kFixed:
      break;
    case ScenarioKind::kEpoch: {
      if (epoch_len < 1) fail("epoch_len must be >= 1");
      if (intervals.size() != operators.size() || assignment.size() != operators.size()) {
        fail("epoch scenario needs one interval per operator");
      }
      std::vector<bool> seen(intervals.size(), false);
      for (std::size_t a : assignment) {
        if (a >= intervals.size() || seen[a]) fail("epoch assignment must be a permutation");
        seen[a] = true;
      }
      for (const auto& iv : intervals) {
        if (!(iv.lo >= 0.0 && iv.lo <= iv.hi && iv.hi <= 1.0)) {
          fail("epoch interval must satisfy 0 <= lo <= hi <= 1");
        }
      }
      break;
    }
  }
}

std::vector<double> ScenarioConfig::max_gains() const {
  std::vector<double> g(operators.size());
  std::transform(operators.begin(), operators.end(), g.begin(),
                 [](const OperatorSpec& o) { return o.g_max; });
  return g;
}

WindowState::WindowState(std::size_t capacity, std::size_t n_op)
    : ring_(capacity, 0), counts_(n_op, 0) {
  if (capacity < 1) throw std::invalid_argument("window capacity must be >= 1");
}

void WindowState::push(OperatorId op) {
  if (op >= counts_.size()) {
    throw std::out_of_range("operator " + std::to_string(op) + " outside 0.." +
                            std::to_string(counts_.size() - 1));
  }
  if (size_ == ring_.size()) {
    --counts_[ring_[head_]];
  } else {
    ++size_;
  }
  ring_[head_] = op;
  ++counts_[op];
  head_ = (head_ + 1) % ring_.size();
}

OperatorId WindowState::back(std::size_t offset) const {
  if (offset < 1 || offset > size_) throw std::out_of_range("window offset out of range");
  return ring_[(head_ + ring_.size() - offset) % ring_.size()];
}

std::vector<OperatorId> WindowState::contents() const {
  std::vector<OperatorId> out;
  out.reserve(size_);
  for (std::size_t off = size_; off >= 1; --off) out.push_back(back(off));
  return out;
}

GainSample gain(const ScenarioConfig& cfg, OperatorId op, const WindowState& window, Rng& rng,
                std::size_t iteration) {
  if (op >= cfg.n_op()) throw std::out_of_range("unknown operator " + std::to_string(op));
  GainSample s{0.0, op, iteration};
  const OperatorSpec& spec = cfg.operators[op];
  switch (cfg.kind) {
    case ScenarioKind::kBinary: {
      const double w = static_cast<double>(cfg.wsize);
      s.value = spec.g_max * ((w - static_cast<double>(window.occurrences(op))) / w);
      break;
    }
    case ScenarioKind::kFixed:
      s.value = rng.uniform() < spec.p ? spec.g_max : 0.0;
      break;
    case ScenarioKind::kEpoch: {
      const GainInterval& iv = cfg.intervals[cfg.assignment[op]];
      s.value = rng.uniform(iv.lo, iv.hi);
      break;
    }
  }
  return s;
}

double expected_uniform_gain(const ScenarioConfig& cfg) {
  if (cfg.kind != ScenarioKind::kBinary) {
    throw std::invalid_argument("expected_uniform_gain is defined for binary scenarios only");
  }
  const double n = static_cast<double>(cfg.n_op());
  return (static_cast<double>(cfg.n_one) / n) * (1.0 - 1.0 / n);
}

std::uint64_t encode_state(const WindowState& window, OperatorId op) {
  std::uint64_t code = 0;
  for (std::size_t off = 1; off <= window.size(); ++off) {
    if (window.back(off) == op) code |= std::uint64_t{1} << (off - 1);
  }
  return code;
}

namespace {
std::uint64_t width_mask(std::size_t wsize) {
  return wsize >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << wsize) - 1;
}
}  // namespace

std::uint64_t next_state(std::uint64_t code, bool played, std::size_t wsize) {
  return ((code << 1) | (played ? 1u : 0u)) & width_mask(wsize);
}

double state_reward(std::uint64_t code, std::size_t wsize, double g_max) {
  const double w = static_cast<double>(wsize);
  return g_max * ((w - static_cast<double>(std::popcount(code & width_mask(wsize)))) / w);
}

ScenarioConfig apply_permutation(const ScenarioConfig& cfg, std::span<const std::size_t> perm) {
  if (perm.size() != cfg.n_op()) throw std::invalid_argument("permutation size mismatch");
  ScenarioConfig out = cfg;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (perm[i] >= cfg.n_op()) throw std::invalid_argument("permutation entry out of range");
    out.operators[i] = cfg.operators[perm[i]];
    if (!cfg.assignment.empty()) out.assignment[i] = cfg.assignment[perm[i]];
  }
  return out;
}

EpochAdvance epoch_advance(const ScenarioConfig& cfg, std::size_t t, Rng& rng) {
  if (cfg.kind != ScenarioKind::kEpoch || cfg.epoch_len == 0 || t == 0 || t % cfg.epoch_len != 0) {
    return {cfg, false};
  }
  std::vector<std::size_t> perm(cfg.n_op());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = perm.size(); i > 1; --i) {
    std::swap(perm[i - 1], perm[rng.below(i)]);
  }
  return {apply_permutation(cfg, perm), true};
}

}  // namespace nsaos
