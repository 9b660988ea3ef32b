#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sumsetlab {

// Dispatch one subcommand invocation. `args` excludes the program name.
// Returns 0 on success, 2 on usage/config errors, 1 on runtime errors.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sumsetlab
