#pragma once

#include <iosfwd>

namespace rfa {

/// Entry point of the `rfa` tool; returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace rfa
