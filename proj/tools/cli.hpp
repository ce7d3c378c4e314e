#pragma once

#include <iosfwd>

namespace spls {

/// Exit codes: 0 success, 1 some row failed, 2 configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spls
