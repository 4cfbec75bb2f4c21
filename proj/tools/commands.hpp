#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>

namespace kk::cli {

enum ExitCode : int {
  ok = 0,
  audit_failed = 2,
  blowup = 3,
  region_violation = 4,
  parse_error = 64,
  missing_input = 66,
};

struct Options {
  std::optional<double> epsilon;
  bool inviscid = false;
  bool force = false;
  /// Overrides the scenario's "output" directory.
  std::optional<std::filesystem::path> out;
};

/// Each command reports to `log`, writes its artifacts and returns an exit
/// code. Library errors are mapped to exit codes by run_guarded().
int cmd_audit(const std::filesystem::path& scenario, const Options& opts, std::ostream& log);
int cmd_solve(const std::filesystem::path& scenario, const Options& opts, std::ostream& log);
int cmd_sweep(const std::filesystem::path& scenario, const Options& opts, std::ostream& log);
int cmd_plot(const std::filesystem::path& index, const Options& opts, std::ostream& log);

/// Worker count for concurrent epsilon members: KK_THREADS if set and
/// positive, else the hardware concurrency, never more than `jobs`.
int worker_count(int jobs);

/// Runs f and maps library exceptions to exit codes, printing the message.
int run_guarded(const std::function<int()>& f, std::ostream& err);

}  // namespace kk::cli
