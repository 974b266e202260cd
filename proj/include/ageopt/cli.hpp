#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ageopt::cli {

// Full command-line entry point; args exclude the program name. Writes
// results to --out or `out`, diagnostics to `err`. Returns 0 on success,
// 2 on config errors, 3 on numeric failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ageopt::cli
