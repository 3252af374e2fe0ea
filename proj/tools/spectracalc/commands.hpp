#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "spectracalc/error.hpp"

namespace spectracalc::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int not_analogous = 1;
inline constexpr int decomposition_failed = 2;
inline constexpr int check_failed = 3;
inline constexpr int usage = 64;
inline constexpr int data = 65;
}  // namespace exit_code

int exit_code_for(ErrorKind kind) noexcept;

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spectracalc::cli
