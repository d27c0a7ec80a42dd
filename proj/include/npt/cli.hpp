#pragma once

#include <iosfwd>

namespace npt {

// Full command-line driver: parses argv, dispatches to one of the commands
// (check | norm | repl | golden), and returns the process exit code.
//
// Exit codes: 0 success, 1 any checker diagnostic, 2 I/O or usage failure,
// 3 reduction budget exhausted.
//
// Streams are injected so tests can drive the driver in-process; main() passes
// std::cin/cout/cerr.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace npt
