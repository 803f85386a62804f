#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dsent::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kValidation = 2;
inline constexpr int kBudget = 3;
inline constexpr int kHypothesis = 4;
inline constexpr int kNumerical = 5;

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dsent::cli
