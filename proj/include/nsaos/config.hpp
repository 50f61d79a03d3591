#pragma once

// Run configuration files.
//
// The format is YAML; JSON documents are accepted as well since they parse
// as YAML. Unknown keys are errors. Example:
//
//   scenario:
//     kind: binary          # binary | fixed | epoch
//     nop: 8
//     n1: [1, 2, 3]         # a number or a list
//     wsize: 3              # a number or a list
//     horizon: 1000
//     epoch_len: 50         # epoch kind
//     operators:            # fixed kind
//       - {p: 0.5, gmax: 1.0}
//     intervals:            # epoch kind, one [lo, hi] per operator
//       - [0.0, 0.5]
//   policies:               # omitted parameters take the tuned defaults
//     - name: EGR
//       eps: 0.05
//     - {name: UCB, ties: random}    # lowest (default) | random
//     - {name: IM, credit: mean}     # max (default) | mean
//   protocol: {reps: 20, pool: 80, top: 20, seed: 42, threads: 1}
//   output: {dir: results, formats: [csv, json]}

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nsaos/harness.hpp"
#include "nsaos/scenario.hpp"

namespace nsaos {

/// Invalid configuration; `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct OutputOptions {
  std::filesystem::path dir = "results";
  bool csv = true;
  bool json = true;

  friend bool operator==(const OutputOptions&, const OutputOptions&) = default;
};

struct RunConfig {
  ScenarioKind kind = ScenarioKind::kBinary;
  std::size_t n_op = 8;
  std::vector<std::size_t> n_ones{1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<std::size_t> wsizes{1, 2, 3, 4, 5, 6, 7, 8};
  std::size_t horizon = 1000;
  std::size_t epoch_len = 50;
  std::vector<OperatorSpec> operators;   // fixed kind
  std::vector<GainInterval> intervals;   // epoch kind; empty means the default table
  std::vector<PolicySpec> policies;
  Protocol protocol;
  /// Seed given in the file; the CLI falls back to the environment otherwise.
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  OutputOptions output;

  /// Full 8x8 grid, every policy with its tuned parameters.
  static RunConfig defaults();

  /// Scenario cells described by this config (binary: the n1 x wsize grid).
  std::vector<ScenarioConfig> cells() const;

  /// Throws ConfigError (line 0) for semantic problems.
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses YAML or JSON text. Missing sections keep defaults(). Throws
/// ConfigError with the line of the offending node.
RunConfig parse_run_config(std::string_view text, std::string_view source = "<config>");
RunConfig load_run_config(const std::filesystem::path& path);

/// YAML rendering with every field spelled out; parses back to an equal config.
std::string serialize_run_config(const RunConfig& cfg);

}  // namespace nsaos
