#pragma once

// Command implementations behind the nonstat-aos executable. They write to
// the given streams and return the process exit code, so tests can drive
// them in-process.

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nsaos::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitUnwritableOutput = 3;

/// Full command line, argv[0] included.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidateOptions {
  bool quick = false;
  /// Deliberately breaks one invariant to exercise the failure path.
  /// Known faults: "normalization".
  std::optional<std::string> inject_fault;
};

/// Analytic self-checks run by `validate`.
std::vector<CheckResult> run_self_checks(const ValidateOptions& opts);

}  // namespace nsaos::cli
