#pragma once

#include <string>
#include <vector>

namespace maxcurv {

/// Entry point shared by the binary and the tests. Returns the process
/// exit status: 0 success, 2 configuration error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace maxcurv
