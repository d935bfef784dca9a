#pragma once

#include <stdexcept>
#include <string>

namespace gpfa {

enum class ErrorKind {
    InvalidArgument,
    DegenerateInput,
    InsufficientSamples,
    DimensionMismatch,
    OrderTooLarge,
    NotEnoughCandidates,
    IndexOutOfRange,
    DegenerateGraph,
    SingularRHS,
    RankError,
    IllConditioned,
    NotEnoughSamples,
    ParseError,
    RaggedRows,
    EmptyFile,
    FileExists,
    Io,
};

// Used by the CLI to pick an exit code.
enum class ErrorCategory { Usage, Data, Numerical };

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::DegenerateInput: return "DegenerateInput";
        case ErrorKind::InsufficientSamples: return "InsufficientSamples";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::OrderTooLarge: return "OrderTooLarge";
        case ErrorKind::NotEnoughCandidates: return "NotEnoughCandidates";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::DegenerateGraph: return "DegenerateGraph";
        case ErrorKind::SingularRHS: return "SingularRHS";
        case ErrorKind::RankError: return "RankError";
        case ErrorKind::IllConditioned: return "IllConditioned";
        case ErrorKind::NotEnoughSamples: return "NotEnoughSamples";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::RaggedRows: return "RaggedRows";
        case ErrorKind::EmptyFile: return "EmptyFile";
        case ErrorKind::FileExists: return "FileExists";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

inline ErrorCategory category(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument:
            return ErrorCategory::Usage;
        case ErrorKind::DegenerateGraph:
        case ErrorKind::SingularRHS:
        case ErrorKind::RankError:
        case ErrorKind::IllConditioned:
            return ErrorCategory::Numerical;
        default:
            return ErrorCategory::Data;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace gpfa
