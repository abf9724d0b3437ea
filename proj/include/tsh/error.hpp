#pragma once

#include <stdexcept>
#include <string>

namespace tsh {

enum class ErrorKind {
    Schema,
    Parse,
    Validation,
    DegenerateRange,
    NonFiniteResult,
    TieUnresolved,
    UnresolvedDomain,
    ResolutionMismatch,
    InsufficientData,
    EmptyGroup,
    Config,
};

inline const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::DegenerateRange: return "degenerate_range";
    case ErrorKind::NonFiniteResult: return "non_finite_result";
    case ErrorKind::TieUnresolved: return "tie_unresolved";
    case ErrorKind::UnresolvedDomain: return "unresolved_domain";
    case ErrorKind::ResolutionMismatch: return "resolution_mismatch";
    case ErrorKind::InsufficientData: return "insufficient_data";
    case ErrorKind::EmptyGroup: return "empty_group";
    case ErrorKind::Config: return "config";
    }
    return "unknown";
}

/// Base error for every recoverable failure raised by the library. The CLI
/// maps these to exit code 1; anything else is treated as internal.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace tsh
