#pragma once

#include <stdexcept>
#include <string>

namespace evs {

enum class ErrorKind {
  UnknownEvent,
  DuplicateEvent,
  InvalidIdentifier,
  TooManyEvents,
  CausalityCycle,
  SelfConflict,
  StabilityViolation,
  InconsistentRule,
  NotAConfiguration,
  NotRStopped,
  WrongHost,
  NotGenerable,
  NotTotal,
  Precondition,
  Distribution,
  UnsafeNet,
  InvalidNet,
  Syntax,
  Io,
};

const char* to_string(ErrorKind kind);

/// Validation or analysis failure. `line` is the 1-based source line when the error
/// originates from a parsed document, 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(what), kind_(kind), line_(line), column_(column) {}

  ErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  ErrorKind kind_;
  int line_;
  int column_;
};

}  // namespace evs
