// Command-line front end; returns the process exit code (0 success,
// 1 invalid arguments/config, 2 numerical failure or flagged residual).
#pragma once

#include <string>
#include <vector>

namespace rydsim {

int run_cli(const std::vector<std::string>& args);

}  // namespace rydsim
