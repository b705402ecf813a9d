#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace largen::cli {

// Exit codes: 0 success, 2 configuration/validation error, 3 numerical
// failure, 4 resonance assertion failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitResonance = 4;

// Runs the `largen` command line (args exclude the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace largen::cli
