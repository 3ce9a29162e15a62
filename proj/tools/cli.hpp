#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qkd3::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kParseError = 2,
    kDomainError = 3,
    kSimulationError = 4,
};

/// Runs one command line (without the program name). Payload goes to `out`
/// unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qkd3::cli
