#pragma once

#include <iosfwd>

namespace vls::cli {

// Exit codes: 0 all pass, 1 warnings, 2 errors or bad usage.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace vls::cli
