#include "squid_horizon/errors.hpp"

namespace squid_horizon {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::FluxOutOfRange: return "FluxOutOfRange";
    case ErrorCode::OverCritical: return "OverCritical";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::CourantViolation: return "CourantViolation";
    case ErrorCode::BandLimit: return "BandLimit";
    case ErrorCode::NoPacket: return "NoPacket";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::OutOfBand: return "OutOfBand";
    case ErrorCode::NoHorizon: return "NoHorizon";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::FitFailure: return "FitFailure";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownKey: return "UnknownKey";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void raise(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace squid_horizon
