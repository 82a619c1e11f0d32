#pragma once

#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

namespace jacobi::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kBadUsage = 2,
    kBadInputFile = 3,
    kNumericalFailure = 4,
    kUnsupportedRange = 5,
};

// Exit status for an error escaping a command.
int exit_code_for(const std::exception& e);

// Runs one command line (args excludes the program name). The document goes
// to `out` unless --output is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jacobi::cli
