#pragma once

#include <ostream>

namespace qspectra::cli {

enum ExitCode : int { kOk = 0, kIncomplete = 1, kInvalid = 2 };

// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qspectra::cli
