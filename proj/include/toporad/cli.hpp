#pragma once

#include <string>
#include <vector>

namespace toporad {

/// Entry point behind the toporad binary: parses the subcommand and runs
/// it. Returns the process exit code (0 iff zero per-item failures).
int run_cli(const std::vector<std::string>& args);

} // namespace toporad
