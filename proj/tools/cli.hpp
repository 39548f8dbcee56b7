#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace novelty::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1; // oracle deviation above tolerance
inline constexpr int kUsageError = 2;  // bad flags or unreadable inputs
inline constexpr int kRunError = 3;    // pipeline failure (missing embeddings, infeasible k, ...)

// Entry point shared by main() and the tests. `args` excludes the program
// name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace novelty::cli
