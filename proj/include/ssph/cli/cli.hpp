#pragma once

namespace ssph::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitTolerance = 4;

/// Entry point of the `ssph` command-line tool; returns the process exit code.
int cli_main(int argc, char **argv);

}  // namespace ssph::cli
