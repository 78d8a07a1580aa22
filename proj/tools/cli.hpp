#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fredholm_cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kRuntime = 3 };

/// Entry point of the `fredholm` tool. Subcommands: quad, audit, eigen.
/// Data goes to --out (or `out` when absent), summaries to `out`,
/// diagnostics and usage text to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fredholm_cli
