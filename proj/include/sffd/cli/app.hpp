#pragma once

#include <ostream>

namespace sffd::cli {

// Entry point behind the sffd binary; returns the exit code.
int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sffd::cli
