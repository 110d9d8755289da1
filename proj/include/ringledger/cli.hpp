#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ringledger::cli {

/// Parses and executes one command line (argv without the program name).
/// Returns the process exit code: 0 success, 1 domain rejection, 2 usage
/// error. All output goes to the given streams; nothing else is printed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ringledger::cli
