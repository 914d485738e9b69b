#pragma once

#include <stdexcept>
#include <string>

namespace cubecover {

enum class ErrorKind {
  InvalidPoint,
  InvalidInput,
  DimensionMismatch,
  NotOnPlane,
  CapExceeded,
  InvalidSequence,
  NotWeight1Integer,
  ParseError,
  CorruptCatalog,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidPoint: return "InvalidPoint";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotOnPlane: return "NotOnPlane";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::InvalidSequence: return "InvalidSequence";
    case ErrorKind::NotWeight1Integer: return "NotWeight1Integer";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::CorruptCatalog: return "CorruptCatalog";
  }
  return "Unknown";
}

/// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failures carry the 1-based line number they occurred on (0 when not file based).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::ParseError,
              line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cubecover
