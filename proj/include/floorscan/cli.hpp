#pragma once

#include <iosfwd>

namespace floorscan {

/// Exit status of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInput = 2,
  kExitStage = 3,
};

/// Runs the `floorscan` command line. Reports and usage go to `out`;
/// diagnostics and stage timings go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace floorscan
