#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wxbits {

enum class ErrorCode {
  InvalidAllocation,
  InfeasibleClamp,
  DomainError,
  ArityMismatch,
  UnitMismatch,
  EmptyInput,
  InsufficientMembers,
  DegenerateEnsemble,
  ParseError,
  SchemaError,
  ValidationError,
  ConfigError,
  BaselineTiming,
  GameNotFound,
  GameExists,
  PlayerNotFound,
  WrongState,
  GameNotOpen,
  GameLocked,
  DeadlinePassed,
  MissingObservation,
  AlreadyVerified,
  CorruptLog,
  ConflictingEvent,
  Internal,
};

std::string_view to_string(ErrorCode code);

// Every failure in the library is reported through this type. The code is
// stable and is what the API and CLI surface to callers.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  // Set for ParseError raised while reading line-oriented input.
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
};

#define WXBITS_REQUIRE(cond, code, msg)        \
  do {                                         \
    if (!(cond)) throw ::wxbits::Error(code, msg); \
  } while (0)

}  // namespace wxbits
