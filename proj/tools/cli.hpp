#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dispatchkit {

/// Runs one CLI invocation (args exclude the program name). Exit codes:
/// 0 success, 1 usage error, 2 solver/runtime failure.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dispatchkit
