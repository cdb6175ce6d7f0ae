#pragma once

#include <iosfwd>

namespace pbg {

/// Entry point of the pbg-spdc tool. Returns the process exit code:
/// 0 success, 2 configuration error, 3 numerical failure, 4 I/O failure.
/// Errors are reported on `err` as a single "error kind=... exit=... message=..." line.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pbg
