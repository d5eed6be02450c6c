#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace microcover::cli {

// Exit codes.
constexpr int kOk = 0;
constexpr int kFailure = 1;        // precondition or validation failure
constexpr int kIndeterminate = 2;  // logarithmic check hit the precision cap
constexpr int kWindow = 3;         // window too short to certify

// Runs one command line (without the program name). JSON goes to `out`
// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace microcover::cli
