#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace viscograd {

enum class ErrorCode {
    NonPositiveSpacing,
    SpacingMisfit,
    EmptyDomain,
    NotInterior,
    StencilOutOfDomain,
    BallExitsDomain,
    NonPositiveEps,
    NonPositiveT,
    EmptyInterior,
    MismatchedInputs,
    RadiiNotDecreasing,
    InvalidSchedule,
    Overflow,
    Not2D,
    GridMismatch,
    InvalidArgument,
    IoError,
    ParseError,
    ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NonPositiveSpacing: return "NonPositiveSpacing";
    case ErrorCode::SpacingMisfit: return "SpacingMisfit";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::NotInterior: return "NotInterior";
    case ErrorCode::StencilOutOfDomain: return "StencilOutOfDomain";
    case ErrorCode::BallExitsDomain: return "BallExitsDomain";
    case ErrorCode::NonPositiveEps: return "NonPositiveEps";
    case ErrorCode::NonPositiveT: return "NonPositiveT";
    case ErrorCode::EmptyInterior: return "EmptyInterior";
    case ErrorCode::MismatchedInputs: return "MismatchedInputs";
    case ErrorCode::RadiiNotDecreasing: return "RadiiNotDecreasing";
    case ErrorCode::InvalidSchedule: return "InvalidSchedule";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::Not2D: return "Not2D";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

/// Exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace viscograd
