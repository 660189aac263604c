#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace crossbell {

enum class ErrorCode {
    DuplicateQubit,
    QubitCollision,
    QubitSetMismatch,
    MissingQubit,
    NotNormalized,
    NonFinite,
    NotUnitary,
    ZeroProbabilityOutcome,
    FactorizationFailure,
    ArityError,
    ProtocolViolation,
    SessionAborted,
    InvalidArgument,
    ParseError,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::DuplicateQubit: return "DuplicateQubit";
    case ErrorCode::QubitCollision: return "QubitCollision";
    case ErrorCode::QubitSetMismatch: return "QubitSetMismatch";
    case ErrorCode::MissingQubit: return "MissingQubit";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::ZeroProbabilityOutcome: return "ZeroProbabilityOutcome";
    case ErrorCode::FactorizationFailure: return "FactorizationFailure";
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::ProtocolViolation: return "ProtocolViolation";
    case ErrorCode::SessionAborted: return "SessionAborted";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can dispatch on the kind without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace crossbell
