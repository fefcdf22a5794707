#pragma once

#include <stdexcept>
#include <string>

namespace squid_horizon {

enum class ErrorCode {
    InvalidArgument,
    FluxOutOfRange,
    OverCritical,
    NonFinite,
    CourantViolation,
    BandLimit,
    NoPacket,
    OutOfRange,
    OutOfBand,
    NoHorizon,
    NoRoot,
    FitFailure,
    ConfigError,
    ParseError,
    UnknownKey,
};

const char* to_string(ErrorCode code) noexcept;

/// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace squid_horizon
