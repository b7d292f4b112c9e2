#pragma once

#include <iosfwd>

namespace vpa {

// Runs the command line interface. Returns the process exit code:
// 0 the queried property holds, 1 it fails, 2 usage or input error,
// 3 the computation hit its time or step budget.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace vpa
