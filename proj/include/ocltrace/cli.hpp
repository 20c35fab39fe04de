#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ocltrace {

/// Exit codes shared by all subcommands.
///   0  success (all checks pass / quiescent run / >= 1 solution)
///   1  check failed or search exhausted with no solution
///   2  usage, file, parse or validation error
///   3  run ended in a contract-violation state
///   4  search bound hit with no solution
enum ExitCode : int {
    kExitOk = 0,
    kExitFail = 1,
    kExitUsage = 2,
    kExitErrorState = 3,
    kExitBoundNoSolution = 4,
};

/// Runs the command line (without argv[0]) and writes reports to `out` and
/// diagnostics to `err`. The `ocltrace` binary is a thin wrapper over this.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ocltrace
