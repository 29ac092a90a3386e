#pragma once

#include <stdexcept>
#include <string>

namespace poa {

// Every recoverable failure in the toolkit maps to one of these kinds so the
// CLI can translate it into a stable exit code (usage=1, data=2, endpoint=3).
enum class ErrorKind {
    MalformedDocument,
    SchemaViolation,
    BadSize,
    PromptIncomplete,
    NoStructuredObject,
    EndpointError,
    ExhaustedRetries,
    MissingPrediction,
    ShapeMismatch,
    ConfigMismatch,
    EmptyConditions,
    WrongArity,
    UnknownStatement,
    MissingStatement,
    ScoreOutOfRange,
    MissingScores,
    RosterMismatch,
    MissingReference,
    EncoderFailure,
    UsageError,
    IoError,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
          kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    // Exit code category: 2 for data problems, 3 for endpoint problems, 1 otherwise.
    int exit_code() const;

private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::MalformedDocument: return "MalformedDocument";
        case ErrorKind::SchemaViolation: return "SchemaViolation";
        case ErrorKind::BadSize: return "BadSize";
        case ErrorKind::PromptIncomplete: return "PromptIncomplete";
        case ErrorKind::NoStructuredObject: return "NoStructuredObject";
        case ErrorKind::EndpointError: return "EndpointError";
        case ErrorKind::ExhaustedRetries: return "ExhaustedRetries";
        case ErrorKind::MissingPrediction: return "MissingPrediction";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::ConfigMismatch: return "ConfigMismatch";
        case ErrorKind::EmptyConditions: return "EmptyConditions";
        case ErrorKind::WrongArity: return "WrongArity";
        case ErrorKind::UnknownStatement: return "UnknownStatement";
        case ErrorKind::MissingStatement: return "MissingStatement";
        case ErrorKind::ScoreOutOfRange: return "ScoreOutOfRange";
        case ErrorKind::MissingScores: return "MissingScores";
        case ErrorKind::RosterMismatch: return "RosterMismatch";
        case ErrorKind::MissingReference: return "MissingReference";
        case ErrorKind::EncoderFailure: return "EncoderFailure";
        case ErrorKind::UsageError: return "UsageError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Error";
}

inline int Error::exit_code() const {
    switch (kind_) {
        case ErrorKind::EndpointError:
        case ErrorKind::ExhaustedRetries:
            return 3;
        case ErrorKind::UsageError:
            return 1;
        default:
            return 2;
    }
}

}  // namespace poa
