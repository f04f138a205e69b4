#pragma once

// The ehsmc command line, callable in-process for tests.
//
// Exit status: 0 holds, 1 fails, 2 usage/parse/model error, 3 bound
// infeasible or verdict not conclusive.

#include <ostream>
#include <string>
#include <vector>

namespace ehs {

enum ExitStatus : int { kHolds = 0, kFails = 1, kUsage = 2, kInconclusive = 3 };

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ehs
