#include "wxbits/error.hpp"

namespace wxbits {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidAllocation: return "InvalidAllocation";
    case ErrorCode::InfeasibleClamp: return "InfeasibleClamp";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::UnitMismatch: return "UnitMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InsufficientMembers: return "InsufficientMembers";
    case ErrorCode::DegenerateEnsemble: return "DegenerateEnsemble";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::BaselineTiming: return "BaselineTiming";
    case ErrorCode::GameNotFound: return "GameNotFound";
    case ErrorCode::GameExists: return "GameExists";
    case ErrorCode::PlayerNotFound: return "PlayerNotFound";
    case ErrorCode::WrongState: return "WrongState";
    case ErrorCode::GameNotOpen: return "GameNotOpen";
    case ErrorCode::GameLocked: return "GameLocked";
    case ErrorCode::DeadlinePassed: return "DeadlinePassed";
    case ErrorCode::MissingObservation: return "MissingObservation";
    case ErrorCode::AlreadyVerified: return "AlreadyVerified";
    case ErrorCode::CorruptLog: return "CorruptLog";
    case ErrorCode::ConflictingEvent: return "ConflictingEvent";
    case ErrorCode::Internal: return "Internal";
  }
  return "Internal";
}

namespace {

std::string with_line(const std::string& message,
                      std::optional<std::size_t> line) {
  if (!line) return message;
  return "line " + std::to_string(*line) + ": " + message;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(with_line(message, line)), code_(code), line_(line) {}

}  // namespace wxbits
