#pragma once

#include <ostream>

namespace biohybrid {

// Exit codes of the command-line front end.
enum ExitCode : int
{
    kExitOk = 0,
    kExitUsage = 1,  // bad arguments, config or input files
    kExitSolver = 2, // a solve failed (global Newton, local update, inversion)
};

// Subcommands matpoint, grow, fit, fem (each needs --config, writes into
// --out) and strip-mesh (geometry flags, mesh JSON to --out or stdout).
// Progress goes to `out` unless --quiet; diagnostics go to `err`.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace biohybrid
