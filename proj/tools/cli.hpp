#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tcam::cli {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kInputError = 2,
    kNumericalError = 3,
};

// Entry point shared by the binary and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tcam::cli
