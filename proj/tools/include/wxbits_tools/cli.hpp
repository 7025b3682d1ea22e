#pragma once

#include <iosfwd>

namespace wxbits::tools {

// Exit codes: 0 success, 1 domain error (the error code is printed), 2 usage
// error, 3 unreadable event log or internal failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wxbits::tools
