#pragma once

#include <iosfwd>

namespace anisoframe::cli {

// Runs one subcommand. Exit codes: 0 all checks passed, 1 a check failed, 2 bad usage or
// parameters, 3 input or runtime error. Errors go to `err` as one JSON object.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace anisoframe::cli
