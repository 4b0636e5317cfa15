// cli.hpp - command-line entry points, callable in-process for tests.
#pragma once

#include <string>
#include <vector>

namespace dixmier::cli {

// Exit codes: 0 verified pass, 1 usage/input error, 2 mathematical failure
// (certificate absent, invariant violated).
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // without the program name

}  // namespace dixmier::cli
