#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace radiomap {

enum class ErrorCode {
  InvalidArgument,
  OutOfProjectionDomain,
  OutOfGrid,
  ParseError,
  EmptyTrace,
  NoResumePoint,
  InsufficientWindow,
  NoMeasurements,
  OverlappingWindows,
  SchemaError,
  DimensionMismatch,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this type; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// A malformed trace row. line() is 1-based and counts the header.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string reason);

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

// Scenario schema violation; pointer() is an RFC 6901 JSON pointer.
class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, const std::string& reason)
      : Error(ErrorCode::SchemaError, pointer + ": " + reason),
        pointer_(std::move(pointer)) {}

  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace radiomap
