#include "radiomap/error.hpp"

namespace radiomap {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutOfProjectionDomain: return "OutOfProjectionDomain";
    case ErrorCode::OutOfGrid: return "OutOfGrid";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyTrace: return "EmptyTrace";
    case ErrorCode::NoResumePoint: return "NoResumePoint";
    case ErrorCode::InsufficientWindow: return "InsufficientWindow";
    case ErrorCode::NoMeasurements: return "NoMeasurements";
    case ErrorCode::OverlappingWindows: return "OverlappingWindows";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

ParseError::ParseError(std::size_t line, std::string reason)
    : Error(ErrorCode::ParseError,
            "line " + std::to_string(line) + ": " + reason),
      line_(line),
      reason_(std::move(reason)) {}

}  // namespace radiomap
