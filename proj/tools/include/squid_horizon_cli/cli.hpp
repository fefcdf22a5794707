#pragma once

#include <iosfwd>

namespace squid_horizon::cli {

enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,
    kConfigError = 2,
    kRuntimeError = 3,
};

/// Entry point of the squid-horizon command; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace squid_horizon::cli
