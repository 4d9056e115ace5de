#pragma once

#include <string>
#include <vector>

namespace lrfr {

/// Command-line entry point (subcommands: simulate, fit, cv, evaluate, mc).
/// Options resolve as flag > LOWRANK_SEED env (seed only) > --config JSON >
/// built-in default. Returns the process exit code: 0 success, 2 validation
/// error, 3 numerical failure, 4 IO error.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, const char* const* argv);

}  // namespace lrfr
