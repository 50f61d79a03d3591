#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "nsaos/config.hpp"
#include "nsaos/harness.hpp"
#include "nsaos/oracle_optimal.hpp"

namespace nsaos::cli {

namespace fs = std::filesystem;

namespace {

struct RunArgs {
  std::string config;
  std::string policy;
  std::optional<std::size_t> n1, wsize, nop, horizon, threads;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::vector<std::string> formats;
};

struct Table1Args {
  std::optional<std::size_t> wsize, comps;
  std::size_t wsize_max = 8;
  std::size_t comps_max = 15;
  std::size_t n1 = 1;
  std::size_t cap = kDefaultCircularCap;
  std::string out;
};

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("NONSTAT_AOS_SEED");
  if (v == nullptr || *v == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long s = std::strtoull(v, &end, 10);
  if (*end != '\0') return std::nullopt;
  return s;
}

// Creates the directory and probes it with a scratch file.
bool ensure_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) return false;
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream f(probe);
    if (!f) return false;
  }
  fs::remove(probe, ec);
  return true;
}

std::string summary_row(const ExperimentResult& r) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-5s %3zu %6zu %10.2f ± %.2f", r.policy.c_str(), r.n_one, r.wsize,
                r.mean, r.std);
  return buf;
}

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = a.config.empty() ? RunConfig::defaults() : load_run_config(a.config);
    if (!a.policy.empty()) {
      cfg.policies.clear();
      std::stringstream names(a.policy);
      std::string name;
      while (std::getline(names, name, ',')) {
        try {
          cfg.policies.push_back(PolicySpec::tuned(parse_policy_kind(name)));
        } catch (const std::invalid_argument& e) {
          throw ConfigError("--policy", 0, e.what());
        }
      }
    }
    if (a.nop) cfg.n_op = *a.nop;
    if (a.n1) cfg.n_ones = {*a.n1};
    if (a.wsize) cfg.wsizes = {*a.wsize};
    if (a.horizon) cfg.horizon = *a.horizon;
    if (a.threads) cfg.threads = *a.threads;
    if (!a.out_dir.empty()) cfg.output.dir = a.out_dir;
    if (!a.formats.empty()) {
      const std::set<std::string> f(a.formats.begin(), a.formats.end());
      cfg.output.csv = f.count("csv") > 0;
      cfg.output.json = f.count("json") > 0;
    }
    // Flag, then file, then environment, then the built-in default.
    if (a.seed) {
      cfg.protocol.master_seed = *a.seed;
    } else if (!cfg.seed) {
      cfg.protocol.master_seed = env_seed().value_or(Protocol{}.master_seed);
    }
    cfg.validate();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }

  if ((cfg.output.csv || cfg.output.json) && !ensure_writable(cfg.output.dir)) {
    err << "error: output directory '" << cfg.output.dir.string() << "' is not writable\n";
    return kExitUnwritableOutput;
  }

  const auto cells = cfg.cells();
  const auto results = sweep(cfg.policies, cells, cfg.protocol, cfg.threads);

  try {
    if (cfg.output.csv) {
      for (const auto& p : write_csv_tables(results, cfg.output.dir)) {
        out << "wrote " << p.string() << "\n";
      }
    }
    if (cfg.output.json) {
      const fs::path p = cfg.output.dir / "summary.json";
      std::ofstream f(p);
      if (!f) throw std::runtime_error("cannot write " + p.string());
      f << summary_json(results, cfg.protocol) << "\n";
      out << "wrote " << p.string() << "\n";
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnwritableOutput;
  }

  out << "seed " << cfg.protocol.master_seed << ", " << cfg.protocol.reps << " replicates, top "
      << cfg.protocol.top << " of " << cfg.protocol.pool << "\n";
  out << "policy  N1  wsize       mean ± std\n";
  for (const auto& r : results) out << summary_row(r) << "\n";
  return kExitOk;
}

int cmd_table1(const Table1Args& a, std::ostream& out, std::ostream& err) {
  const std::size_t w_lo = a.wsize.value_or(1);
  const std::size_t w_hi = a.wsize.value_or(a.wsize_max);
  const std::size_t c_lo = a.comps.value_or(2);
  const std::size_t c_hi = a.comps.value_or(a.comps_max);
  if (w_lo < 1 || c_lo < 1 || w_hi < w_lo || c_hi < c_lo) {
    err << "error: empty or invalid wsize/comps range\n";
    return kExitInvalidInput;
  }
  if (c_hi > a.cap) {
    err << "error: comps " << c_hi << " exceeds the cap of " << a.cap << " (use --cap)\n";
    return kExitInvalidInput;
  }

  std::vector<Table1Cell> cells;
  try {
    cells = table1(w_lo, w_hi, c_lo, c_hi, a.n1, a.cap);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }

  std::ofstream file;
  std::ostream* dst = &out;
  if (!a.out.empty()) {
    const fs::path p(a.out);
    if (p.has_parent_path() && !ensure_writable(p.parent_path())) {
      err << "error: cannot write " << a.out << "\n";
      return kExitUnwritableOutput;
    }
    file.open(p);
    if (!file) {
      err << "error: cannot write " << a.out << "\n";
      return kExitUnwritableOutput;
    }
    dst = &file;
  }

  *dst << "wsize,comps,gain,exact,paper_gain,match\n";
  std::size_t compared = 0, mismatched = 0;
  for (const auto& c : cells) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.3f,%lld/%lld,", c.wsize, c.comps, c.gain.to_double(),
                  static_cast<long long>(c.gain.num()), static_cast<long long>(c.gain.den()));
    *dst << buf;
    if (c.paper_gain) {
      std::snprintf(buf, sizeof buf, "%.3f,%s", *c.paper_gain, c.match ? "yes" : "no");
      *dst << buf;
      ++compared;
      mismatched += !c.match;
    } else {
      *dst << ",";
    }
    *dst << "\n";
  }
  if (!a.out.empty()) out << "wrote " << a.out << "\n";
  err << cells.size() << " cells, " << compared << " compared with the published table, "
      << mismatched << " differ\n";
  return kExitOk;
}

int cmd_validate(const ValidateOptions& opts, std::ostream& out) {
  std::vector<std::string> failed;
  for (const auto& c : run_self_checks(opts)) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    if (!c.passed) failed.push_back(c.name);
  }
  if (failed.empty()) {
    out << "all invariants hold\n";
    return kExitOk;
  }
  out << "failed invariants:";
  for (const auto& f : failed) out << " " << f;
  out << "\n";
  return kExitCheckFailed;
}

}  // namespace

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Operator selection under non-stationary gains"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run the replicate protocol on a sweep or a single cell");
  run_cmd->add_option("--config", run.config, "YAML or JSON run configuration");
  run_cmd->add_option("--policy", run.policy, "Policy short name(s), comma separated");
  run_cmd->add_option("--n1", run.n1, "Number of 'one' operators");
  run_cmd->add_option("--wsize", run.wsize, "Window size");
  run_cmd->add_option("--nop", run.nop, "Number of operators");
  run_cmd->add_option("--horizon", run.horizon, "Iterations per run");
  run_cmd->add_option("--seed", run.seed, "Master seed (else config, NONSTAT_AOS_SEED, 42)");
  run_cmd->add_option("--threads", run.threads, "Worker threads, 0 for all cores");
  run_cmd->add_option("--out", run.out_dir, "Output directory");
  run_cmd->add_option("--format", run.formats, "Output formats")
      ->check(CLI::IsMember({"csv", "json"}))
      ->delimiter(',');

  Table1Args t1;
  auto* t1_cmd = app.add_subcommand("table1", "Best circular schedules per window size and period");
  t1_cmd->add_option("--wsize", t1.wsize, "Single window size");
  t1_cmd->add_option("--comps", t1.comps, "Single period length");
  t1_cmd->add_option("--wsize-max", t1.wsize_max, "Largest window size")->capture_default_str();
  t1_cmd->add_option("--comps-max", t1.comps_max, "Longest period")->capture_default_str();
  t1_cmd->add_option("--n1", t1.n1, "Number of 'one' operators")->capture_default_str();
  t1_cmd->add_option("--cap", t1.cap, "Maximum period the solver accepts")->capture_default_str();
  t1_cmd->add_option("--out", t1.out, "CSV file (default stdout)");

  ValidateOptions val;
  std::string fault;
  auto* val_cmd = app.add_subcommand("validate", "Run the analytic self-checks");
  val_cmd->add_flag("--quick", val.quick, "Monte Carlo sizes divided by 10");
  val_cmd->add_option("--inject-fault", fault, "Break an invariant on purpose")
      ->check(CLI::IsMember({"normalization"}));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitInvalidInput;
  }

  if (run_cmd->parsed()) return cmd_run(run, out, err);
  if (t1_cmd->parsed()) return cmd_table1(t1, out, err);
  if (!fault.empty()) val.inject_fault = fault;
  return cmd_validate(val, out);
}

}  // namespace nsaos::cli
