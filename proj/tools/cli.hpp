#pragma once

#include <string>

#include "output.hpp"
#include "params.hpp"

namespace nlpa::cli {

// Runs one command into `out`, filling the manifest's outputs. Returns 0 when
// all checks pass and 1 otherwise; throws UsageError for bad parameters.
int execute(const std::string& command, const Params& p, const std::string& out, Manifest& m);

// Entry point of the nlpa binary: 0 pass, 1 check failure, 2 usage.
int main_cli(int argc, char** argv);

}  // namespace nlpa::cli
