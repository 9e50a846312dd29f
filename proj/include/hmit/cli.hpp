#pragma once

namespace hmit {

// Dispatches a full command line (argv[0] included). Returns the process
// exit status: 0 success, 1 usage error, 2 runtime error. Diagnostics go to
// stderr, data to stdout or the requested files.
int run_cli(int argc, const char* const* argv);

}  // namespace hmit
