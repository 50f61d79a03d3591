#include "nsaos/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace nsaos {

ConfigError::ConfigError(std::string source, int line, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                         message),
      line_(line) {}

RunConfig RunConfig::defaults() {
  RunConfig cfg;
  for (PolicyKind k : all_policy_kinds()) cfg.policies.push_back(PolicySpec::tuned(k));
  return cfg;
}

std::vector<ScenarioConfig> RunConfig::cells() const {
  std::vector<ScenarioConfig> out;
  switch (kind) {
    case ScenarioKind::kBinary:
      return binary_grid(n_op, n_ones, wsizes, horizon);
    case ScenarioKind::kFixed:
      for (std::size_t w : wsizes) out.push_back(ScenarioConfig::fixed(operators, horizon, w));
      break;
    case ScenarioKind::kEpoch:
      for (std::size_t w : wsizes) {
        out.push_back(ScenarioConfig::epoch(n_op, epoch_len, intervals, horizon, w));
      }
      break;
  }
  return out;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("config", 0, msg); };
  if (wsizes.empty()) fail("scenario.wsize must list at least one value");
  if (policies.empty()) fail("at least one policy is required");
  if (kind == ScenarioKind::kBinary && n_ones.empty()) fail("scenario.n1 must list at least one value");
  if (kind == ScenarioKind::kFixed && operators.size() != n_op) {
    fail("scenario.operators must list nop entries for the fixed kind");
  }
  if (kind == ScenarioKind::kEpoch && !intervals.empty() && intervals.size() != n_op) {
    fail("scenario.intervals must list nop entries");
  }
  try {
    protocol.validate();
    const auto all = cells();
    for (const auto& c : all) {
      for (const auto& p : policies) {
        p.validate(c.n_op());
        if (p.kind == PolicyKind::kIsland && protocol.top > p.psize) {
          fail("protocol.top exceeds IM psize");
        }
      }
    }
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

namespace {

int line_of(const YAML::Node& node) { return node.Mark().is_null() ? 0 : node.Mark().line + 1; }

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
    throw ConfigError(source_, line_of(at), msg);
  }

  void require_map(const YAML::Node& node, std::string_view what) const {
    if (!node.IsMap()) fail(node, std::string(what) + " must be a mapping");
  }

  void check_keys(const YAML::Node& map, std::string_view section,
                  std::initializer_list<std::string_view> allowed) const {
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      bool ok = false;
      for (auto a : allowed) ok = ok || a == key;
      if (!ok) fail(kv.first, "unknown key '" + key + "' in " + std::string(section));
    }
  }

  template <typename T>
  T scalar(const YAML::Node& node, std::string_view key) const {
    if (!node.IsScalar()) fail(node, std::string(key) + " must be a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, "invalid value '" + node.Scalar() + "' for " + std::string(key));
    }
  }

  std::size_t count(const YAML::Node& node, std::string_view key) const {
    if (node.IsScalar() && !node.Scalar().empty() && node.Scalar()[0] == '-') {
      fail(node, std::string(key) + " must be non-negative");
    }
    return scalar<std::size_t>(node, key);
  }

  std::vector<std::size_t> counts(const YAML::Node& node, std::string_view key) const {
    std::vector<std::size_t> out;
    if (node.IsSequence()) {
      for (const auto& item : node) out.push_back(count(item, key));
    } else {
      out.push_back(count(node, key));
    }
    return out;
  }

 private:
  std::string source_;
};

void read_scenario(const Reader& rd, const YAML::Node& node, RunConfig& cfg) {
  rd.require_map(node, "scenario");
  rd.check_keys(node, "scenario",
                {"kind", "nop", "n1", "wsize", "horizon", "epoch_len", "operators", "intervals"});
  if (auto n = node["kind"]) {
    try {
      cfg.kind = parse_scenario_kind(rd.scalar<std::string>(n, "kind"));
    } catch (const std::invalid_argument& e) {
      rd.fail(n, e.what());
    }
  }
  if (auto n = node["nop"]) cfg.n_op = rd.count(n, "nop");
  if (auto n = node["n1"]) cfg.n_ones = rd.counts(n, "n1");
  if (auto n = node["wsize"]) cfg.wsizes = rd.counts(n, "wsize");
  if (auto n = node["horizon"]) cfg.horizon = rd.count(n, "horizon");
  if (auto n = node["epoch_len"]) cfg.epoch_len = rd.count(n, "epoch_len");
  if (auto n = node["operators"]) {
    if (!n.IsSequence()) rd.fail(n, "scenario.operators must be a list");
    cfg.operators.clear();
    for (const auto& op : n) {
      rd.require_map(op, "operator entry");
      rd.check_keys(op, "operator entry", {"p", "gmax"});
      OperatorSpec spec;
      if (auto p = op["p"]) spec.p = rd.scalar<double>(p, "p");
      if (auto g = op["gmax"]) spec.g_max = rd.scalar<double>(g, "gmax");
      if (!(spec.p >= 0 && spec.p <= 1)) rd.fail(op, "operator p must be in [0,1]");
      if (!(spec.g_max >= 0 && spec.g_max <= 1)) rd.fail(op, "operator gmax must be in [0,1]");
      cfg.operators.push_back(spec);
    }
    if (!node["nop"]) cfg.n_op = cfg.operators.size();
  }
  if (auto n = node["intervals"]) {
    if (!n.IsSequence()) rd.fail(n, "scenario.intervals must be a list");
    cfg.intervals.clear();
    for (const auto& iv : n) {
      if (!iv.IsSequence() || iv.size() != 2) rd.fail(iv, "interval must be [lo, hi]");
      GainInterval g{rd.scalar<double>(iv[0], "lo"), rd.scalar<double>(iv[1], "hi")};
      if (!(g.lo >= 0 && g.lo <= g.hi && g.hi <= 1)) rd.fail(iv, "interval needs 0 <= lo <= hi <= 1");
      cfg.intervals.push_back(g);
    }
    if (!node["nop"]) cfg.n_op = cfg.intervals.size();
  }
  if (cfg.n_op < 1) rd.fail(node, "scenario.nop must be >= 1");
  for (std::size_t n1 : cfg.n_ones) {
    if (n1 > cfg.n_op) rd.fail(node["n1"] ? node["n1"] : node, "n1 must not exceed nop");
  }
  for (std::size_t w : cfg.wsizes) {
    if (w < 1 || w > kMaxWindow) {
      rd.fail(node["wsize"] ? node["wsize"] : node,
              "wsize must be in 1.." + std::to_string(kMaxWindow));
    }
  }
  if (cfg.epoch_len < 1) rd.fail(node, "scenario.epoch_len must be >= 1");
}

void read_policy(const Reader& rd, const YAML::Node& node, RunConfig& cfg) {
  if (node.IsScalar()) {
    try {
      cfg.policies.push_back(PolicySpec::tuned(parse_policy_kind(node.Scalar())));
    } catch (const std::invalid_argument& e) {
      rd.fail(node, e.what());
    }
    return;
  }
  rd.require_map(node, "policy entry");
  rd.check_keys(node, "policy entry",
                {"name", "eps", "p_min", "beta", "alpha", "gamma", "delta", "psize", "scale",
                 "normalized_gains", "utility", "credit", "ties"});
  if (!node["name"]) rd.fail(node, "policy entry needs a name");
  PolicySpec spec;
  try {
    spec = PolicySpec::tuned(parse_policy_kind(rd.scalar<std::string>(node["name"], "name")));
  } catch (const std::invalid_argument& e) {
    rd.fail(node["name"], e.what());
  }
  if (auto n = node["eps"]) spec.eps = rd.scalar<double>(n, "eps");
  if (auto n = node["p_min"]) spec.p_min = rd.scalar<double>(n, "p_min");
  if (auto n = node["beta"]) spec.beta = rd.scalar<double>(n, "beta");
  if (auto n = node["alpha"]) spec.alpha = rd.scalar<double>(n, "alpha");
  if (auto n = node["gamma"]) spec.gamma = rd.scalar<double>(n, "gamma");
  if (auto n = node["delta"]) spec.delta = rd.scalar<double>(n, "delta");
  if (auto n = node["psize"]) spec.psize = rd.count(n, "psize");
  if (auto n = node["scale"]) spec.scale = rd.scalar<double>(n, "scale");
  if (auto n = node["normalized_gains"]) spec.normalized_gains = rd.scalar<bool>(n, "normalized_gains");
  if (auto n = node["utility"]) {
    const auto v = rd.scalar<std::string>(n, "utility");
    if (v == "recency") {
      spec.utility = UtilityMode::kRecency;
    } else if (v == "mean") {
      spec.utility = UtilityMode::kEmpiricalMean;
    } else {
      rd.fail(n, "utility must be 'recency' or 'mean'");
    }
  }
  if (auto n = node["credit"]) {
    const auto v = rd.scalar<std::string>(n, "credit");
    if (v == "max") {
      spec.credit = CreditRule::kMax;
    } else if (v == "mean") {
      spec.credit = CreditRule::kMean;
    } else {
      rd.fail(n, "credit must be 'max' or 'mean'");
    }
  }
  if (auto n = node["ties"]) {
    const auto v = rd.scalar<std::string>(n, "ties");
    if (v == "lowest") {
      spec.ties = TieBreak::kLowest;
    } else if (v == "random") {
      spec.ties = TieBreak::kRandom;
    } else {
      rd.fail(n, "ties must be 'lowest' or 'random'");
    }
  }
  try {
    spec.validate(cfg.n_op);
  } catch (const std::invalid_argument& e) {
    rd.fail(node, e.what());
  }
  cfg.policies.push_back(spec);
}

void read_protocol(const Reader& rd, const YAML::Node& node, RunConfig& cfg) {
  rd.require_map(node, "protocol");
  rd.check_keys(node, "protocol", {"reps", "pool", "top", "seed", "threads"});
  if (auto n = node["reps"]) cfg.protocol.reps = rd.count(n, "reps");
  if (auto n = node["pool"]) cfg.protocol.pool = rd.count(n, "pool");
  if (auto n = node["top"]) cfg.protocol.top = rd.count(n, "top");
  if (auto n = node["seed"]) {
    cfg.seed = rd.scalar<std::uint64_t>(n, "seed");
    cfg.protocol.master_seed = *cfg.seed;
  }
  if (auto n = node["threads"]) cfg.threads = rd.count(n, "threads");
  try {
    cfg.protocol.validate();
  } catch (const std::invalid_argument& e) {
    rd.fail(node, e.what());
  }
}

void read_output(const Reader& rd, const YAML::Node& node, RunConfig& cfg) {
  rd.require_map(node, "output");
  rd.check_keys(node, "output", {"dir", "formats"});
  if (auto n = node["dir"]) cfg.output.dir = rd.scalar<std::string>(n, "dir");
  if (auto n = node["formats"]) {
    cfg.output.csv = cfg.output.json = false;
    const YAML::Node list = n.IsSequence() ? n : YAML::Node(YAML::NodeType::Sequence);
    auto take = [&](const YAML::Node& item) {
      const auto f = rd.scalar<std::string>(item, "formats");
      if (f == "csv") {
        cfg.output.csv = true;
      } else if (f == "json") {
        cfg.output.json = true;
      } else {
        rd.fail(item, "format must be 'csv' or 'json'");
      }
    };
    if (n.IsSequence()) {
      for (const auto& item : n) take(item);
    } else {
      take(n);
    }
  }
}

}  // namespace

RunConfig parse_run_config(std::string_view text, std::string_view source) {
  const Reader rd{std::string(source)};
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(std::string(source), e.mark.line + 1, e.msg);
  }
  RunConfig cfg = RunConfig::defaults();
  if (root.IsNull()) return cfg;
  rd.require_map(root, "config root");
  rd.check_keys(root, "config root", {"scenario", "policies", "protocol", "output"});
  // The scenario comes first: policy checks depend on nop.
  if (auto n = root["scenario"]) read_scenario(rd, n, cfg);
  if (auto n = root["policies"]) {
    if (!n.IsSequence()) rd.fail(n, "policies must be a list");
    cfg.policies.clear();
    for (const auto& p : n) read_policy(rd, p, cfg);
  }
  if (auto n = root["protocol"]) read_protocol(rd, n, cfg);
  if (auto n = root["output"]) read_output(rd, n, cfg);
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(source), 0, e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot read config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path.string());
}

std::string serialize_run_config(const RunConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;

  out << YAML::Key << "scenario" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << std::string(to_string(cfg.kind));
  out << YAML::Key << "nop" << YAML::Value << cfg.n_op;
  out << YAML::Key << "n1" << YAML::Value << YAML::Flow << cfg.n_ones;
  out << YAML::Key << "wsize" << YAML::Value << YAML::Flow << cfg.wsizes;
  out << YAML::Key << "horizon" << YAML::Value << cfg.horizon;
  out << YAML::Key << "epoch_len" << YAML::Value << cfg.epoch_len;
  if (!cfg.operators.empty()) {
    out << YAML::Key << "operators" << YAML::Value << YAML::BeginSeq;
    for (const auto& op : cfg.operators) {
      out << YAML::Flow << YAML::BeginMap << YAML::Key << "p" << YAML::Value << op.p << YAML::Key
          << "gmax" << YAML::Value << op.g_max << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  if (!cfg.intervals.empty()) {
    out << YAML::Key << "intervals" << YAML::Value << YAML::BeginSeq;
    for (const auto& iv : cfg.intervals) {
      out << YAML::Flow << YAML::BeginSeq << iv.lo << iv.hi << YAML::EndSeq;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;

  out << YAML::Key << "policies" << YAML::Value << YAML::BeginSeq;
  for (const auto& p : cfg.policies) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << std::string(p.name());
    out << YAML::Key << "alpha" << YAML::Value << p.alpha;
    out << YAML::Key << "beta" << YAML::Value << p.beta;
    out << YAML::Key << "eps" << YAML::Value << p.eps;
    out << YAML::Key << "p_min" << YAML::Value << p.p_min;
    out << YAML::Key << "gamma" << YAML::Value << p.gamma;
    out << YAML::Key << "delta" << YAML::Value << p.delta;
    out << YAML::Key << "scale" << YAML::Value << p.scale;
    out << YAML::Key << "normalized_gains" << YAML::Value << p.normalized_gains;
    out << YAML::Key << "psize" << YAML::Value << p.psize;
    out << YAML::Key << "utility" << YAML::Value
        << (p.utility == UtilityMode::kRecency ? "recency" : "mean");
    out << YAML::Key << "credit" << YAML::Value << (p.credit == CreditRule::kMax ? "max" : "mean");
    out << YAML::Key << "ties" << YAML::Value << (p.ties == TieBreak::kLowest ? "lowest" : "random");
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "protocol" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "reps" << YAML::Value << cfg.protocol.reps;
  out << YAML::Key << "pool" << YAML::Value << cfg.protocol.pool;
  out << YAML::Key << "top" << YAML::Value << cfg.protocol.top;
  if (cfg.seed) out << YAML::Key << "seed" << YAML::Value << *cfg.seed;
  out << YAML::Key << "threads" << YAML::Value << cfg.threads;
  out << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dir" << YAML::Value << cfg.output.dir.string();
  out << YAML::Key << "formats" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  if (cfg.output.csv) out << "csv";
  if (cfg.output.json) out << "json";
  out << YAML::EndSeq;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace nsaos
