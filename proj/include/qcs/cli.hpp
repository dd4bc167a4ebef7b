#pragma once

// The qcs command line: scan, dist, lfunc, positivity, rmf, dickman, tail,
// constants. Exit codes: 0 success, 1 usage, 2 runtime or assertion failure,
// 3 I/O.

#include <ostream>
#include <string>
#include <vector>

namespace qcs {

/// args excludes the program name. Tables written to "-" go to out.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace qcs
