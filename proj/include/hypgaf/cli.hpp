#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hypgaf::cli {

inline constexpr const char* kToolVersion = "hypgaf 0.1.0";

/// Runs the command line `args` (without the program name) and returns the
/// process exit status: 0 success, 2 usage or domain error, 3 IO failure,
/// 4 numeric reliability failure, 5 resource cap.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hypgaf::cli
