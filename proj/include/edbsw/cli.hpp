#pragma once

namespace edbsw::cli {

// Exit codes used by the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitPipelineError = 3;
inline constexpr int kExitFilterError = 4;

// Full argv-level entry point (subcommands: detect, compare, filters, ablate).
// Returns the process exit status; never throws.
int run(int argc, char** argv);

}  // namespace edbsw::cli
