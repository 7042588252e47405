#pragma once

#include <ostream>

namespace sadik {

/// Entry point of the command-line tool. Data goes to `out` (or the file
/// named by --out), diagnostics to `err`. Returns the process exit code:
/// 0 success, 1 tolerance or numeric failure, 2 invalid arguments.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sadik
