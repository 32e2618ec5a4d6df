#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace topickit::cli {

// Runs one invocation; `args` excludes the program name. Returns 0 on
// success, 1 for findings or domain errors, 2 for usage, I/O or malformed
// input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace topickit::cli
