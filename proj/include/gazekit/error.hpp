#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gazekit {

enum class ErrorCode {
    AllZeroGrid,
    InvalidGrid,
    ShapeMismatch,
    ZeroVariance,
    NoFixations,
    AllFixated,
    InsufficientNegatives,
    DegenerateRange,
    LengthMismatch,
    DegenerateNorm,
    TooShort,
    MissingField,
    OrderViolation,
    EmptyField,
    InvalidCharacter,
    UnexpectedSegment,
    EmptyCorpus,
    InvalidArgument,
    ParseError,
    IoError,
};

/// Stable name used in tables, reports and diagnostics.
std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gazekit
