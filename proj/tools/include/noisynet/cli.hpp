#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace noisynet::cli {

// Runs one command line (without the program name). Diagnostics go to `err`,
// results that are not written to files go to `out`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace noisynet::cli
