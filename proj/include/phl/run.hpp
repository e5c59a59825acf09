// run.hpp — executes a parsed RunConfig and emits its result table.

#pragma once

#include "phl/config.hpp"
#include "phl/emit.hpp"

#include <iosfwd>

namespace phl::cli {

// Exit codes of the tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitIo = 3;

// Builds the result table for the configured mode. Numerical-invariant
// failures mid-run flush what was computed and set table.failed.
Table run_to_table(const RunConfig& config);

// run_to_table + write to config.out (or stdout); returns an exit code.
int run(const RunConfig& config);

}  // namespace phl::cli
