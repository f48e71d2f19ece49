#pragma once

#include "config.hpp"

namespace lcs::cli {

// Each returns the process exit code; artifacts go to output.dir with output.prefix.
int run_subcommand(const Config& cfg);

}  // namespace lcs::cli
