#pragma once

// The c1p command line, callable in-process for tests.

#include <ostream>
#include <string>
#include <vector>

namespace c1p::cli {

// Runs one command line given without the program name and returns the exit
// code: 0 YES/BOUNDED/success, 1 NO/UNBOUNDED/no witness, 2 usage or model
// error, 3 resource exceeded.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace c1p::cli
