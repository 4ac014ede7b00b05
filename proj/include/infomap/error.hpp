#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace infomap {

enum class ErrorCode {
  InvalidArgument,
  InvalidRange,
  InvalidFill,
  OutOfBounds,
  FormatError,
  DimensionMismatch,
  CycleDetected,
  DuplicateName,
  UnknownName,
  DuplicateId,
  UnknownId,
  EmptyLog,
  AllUnknown,
  SingularInnovation,
  InvalidConfig,
  SpecMismatch,
  PaletteMiss,
  ProviderRange,
  IoError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::InvalidFill: return "InvalidFill";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::EmptyLog: return "EmptyLog";
    case ErrorCode::AllUnknown: return "AllUnknown";
    case ErrorCode::SingularInnovation: return "SingularInnovation";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::SpecMismatch: return "SpecMismatch";
    case ErrorCode::PaletteMiss: return "PaletteMiss";
    case ErrorCode::ProviderRange: return "ProviderRange";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library. `code()` identifies the failure
/// class; format errors additionally carry the byte offset of the fault.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Error(ErrorCode code, const std::string& message, std::size_t offset)
      : std::runtime_error(std::string(to_string(code)) + " at byte " + std::to_string(offset) + ": " +
                           message),
        code_(code),
        offset_(offset) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> offset_;
};

}  // namespace infomap
