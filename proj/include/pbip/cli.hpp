#pragma once

namespace pbip {

/// Entry point of the command-line tool. Exit code 0 iff the solve
/// converged or the check passed, 2 on usage/registry errors, 1 otherwise.
int cli_main(int argc, const char* const* argv);

}  // namespace pbip
