#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace inkmark::cli {

/// Runs one CLI invocation. `args` excludes the program name. Exit codes:
/// 0 success or verified, 1 verification failed or tamper found, 2 usage
/// error, 3 I/O or capacity error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace inkmark::cli
