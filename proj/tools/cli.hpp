#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wlab::cli {

// The shipped fact file, compiled into the binary at build time.
const char* embedded_zoo_facts();

// Runs the command line given the argv tail (program name excluded).
// Returns the process exit code: 0 success, 1 verification or consistency
// failure, 2 usage or parse error. All report output goes to `out`,
// diagnostics to `err`; output is byte-deterministic for a fixed command.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace wlab::cli
