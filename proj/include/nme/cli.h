#pragma once

#include <iosfwd>

namespace nme {

/// Entry point of the `nme` command line tool. Subcommands: solve, generate,
/// bench, verify-shift, scalar-critical. Returns 0 on success, 1 on a
/// numerical failure, 2 on bad input or I/O errors.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace nme
