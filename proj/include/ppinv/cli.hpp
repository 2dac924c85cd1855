#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ppinv {

// Runs one command-line invocation (arguments exclude the program name).
// Human-readable results go to `out`, diagnostics to `err`.  Returns the
// process exit status: 0 when every verdict passed, 1 when a report
// contradicts its theorem, 2 on usage or parameter errors.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ppinv
