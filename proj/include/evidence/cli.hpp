#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace evidence {

// Runs the command line (arguments without the program name). Exit status:
// 0 true/SAT/realizable, 1 false/UNSAT/not realizable, 2 UNKNOWN, 3 usage or input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace evidence
