#include "gazekit/error.hpp"

namespace gazekit {

std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::AllZeroGrid: return "AllZeroGrid";
        case ErrorCode::InvalidGrid: return "InvalidGrid";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::NoFixations: return "NoFixations";
        case ErrorCode::AllFixated: return "AllFixated";
        case ErrorCode::InsufficientNegatives: return "InsufficientNegatives";
        case ErrorCode::DegenerateRange: return "DegenerateRange";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::DegenerateNorm: return "DegenerateNorm";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::MissingField: return "MissingField";
        case ErrorCode::OrderViolation: return "OrderViolation";
        case ErrorCode::EmptyField: return "EmptyField";
        case ErrorCode::InvalidCharacter: return "InvalidCharacter";
        case ErrorCode::UnexpectedSegment: return "UnexpectedSegment";
        case ErrorCode::EmptyCorpus: return "EmptyCorpus";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace gazekit
