#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace innk {

/// Base for every error raised by the library. Callers that only need a
/// message can catch this; the subclasses let tests and the server tell the
/// failure modes apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a domain invariant (non-finite or off-canvas point).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A caller-supplied argument is outside an operation's precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Operation is illegal in the current phase of the state machine.
class StateError : public Error {
 public:
  using Error::Error;
};

/// Sender is not allowed to perform the operation (e.g. a Guesser drawing).
class AuthorizationError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Dataset loading failed as a whole (e.g. a category ended up empty).
class LoadError : public Error {
 public:
  using Error::Error;
};

enum class ParseErrorKind {
  MalformedJson,
  NotAnObject,
  MissingField,
  WrongFieldType,
  EmptyWord,
  EmptyDrawing,
  BadStrokeShape,
  LengthMismatch,
  EmptyStroke,
  NonIntegerCoordinate,
  CoordinateOutOfRange,
};

const char* to_string(ParseErrorKind kind);

/// One ndjson line could not be turned into a LabeledDrawing. Carries the
/// source name and 1-based line number when known (0 means unknown).
class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, const std::string& detail, std::string source = {},
             std::size_t line = 0);

  ParseErrorKind kind() const noexcept { return kind_; }
  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ParseErrorKind kind_;
  std::string detail_;
  std::string source_;
  std::size_t line_;
};

}  // namespace innk
