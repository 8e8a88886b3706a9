#pragma once

#include <iosfwd>

namespace persmode::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kRuntimeError = 2 };

/// Entry point of the persmode command-line tool. Subcommands: sample,
/// estimate, diagram, bottleneck, oracle, sweep, plot.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace persmode::cli
