#include "innk/errors.hpp"

namespace innk {

const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::MalformedJson: return "malformed json";
    case ParseErrorKind::NotAnObject: return "not an object";
    case ParseErrorKind::MissingField: return "missing field";
    case ParseErrorKind::WrongFieldType: return "wrong field type";
    case ParseErrorKind::EmptyWord: return "empty word";
    case ParseErrorKind::EmptyDrawing: return "empty drawing";
    case ParseErrorKind::BadStrokeShape: return "bad stroke shape";
    case ParseErrorKind::LengthMismatch: return "x/y length mismatch";
    case ParseErrorKind::EmptyStroke: return "empty stroke";
    case ParseErrorKind::NonIntegerCoordinate: return "non-integer coordinate";
    case ParseErrorKind::CoordinateOutOfRange: return "coordinate out of range";
  }
  return "unknown";
}

namespace {

std::string compose(ParseErrorKind kind, const std::string& detail, const std::string& source,
                    std::size_t line) {
  std::string where;
  if (!source.empty()) where = source;
  if (line > 0) where += (where.empty() ? "line " : ":") + std::to_string(line);
  std::string msg = where.empty() ? std::string{} : where + ": ";
  msg += to_string(kind);
  if (!detail.empty()) msg += " (" + detail + ")";
  return msg;
}

}  // namespace

ParseError::ParseError(ParseErrorKind kind, const std::string& detail, std::string source,
                       std::size_t line)
    : Error(compose(kind, detail, source, line)),
      kind_(kind),
      detail_(detail),
      source_(std::move(source)),
      line_(line) {}

}  // namespace innk
