#pragma once

#include <iosfwd>

namespace hwr::cli {

/// Exit codes: 0 success, 1 usage or input error, 2 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hwr::cli
