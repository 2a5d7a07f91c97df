#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lpcond::cli {

/// Runs the command line tool on `args` (program name excluded). Reports go to
/// `out` unless --output names a file; diagnostics go to `err`. Returns the
/// process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lpcond::cli
