#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fsrlab {

// Exit codes: 0 success or every reported verdict holds; 1 a property fails,
// a probe finds a violation or witness, or a crosscheck disagrees; 2 input,
// usage or validation error.
enum ExitCode { kExitOk = 0, kExitFinding = 1, kExitInput = 2 };

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fsrlab
