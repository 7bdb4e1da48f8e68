#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gsreloc::cli {

// Parses `args` (without the program name) and runs the chosen subcommand.
// Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gsreloc::cli
