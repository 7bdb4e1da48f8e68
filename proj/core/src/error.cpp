#include "gsreloc/error.hpp"

namespace gsreloc {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kOutOfBounds: return "OutOfBounds";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kDegenerate: return "DegenerateGeometry";
    case ErrorCode::kInsufficientMatches: return "InsufficientMatches";
    case ErrorCode::kInsufficientDepth: return "InsufficientDepth";
    case ErrorCode::kCheiralityViolation: return "CheiralityViolation";
    case ErrorCode::kNoPositiveDepth: return "NoPositiveDepth";
    case ErrorCode::kSingular: return "Singular";
    case ErrorCode::kNoConsensus: return "NoConsensus";
    case ErrorCode::kEmptyDatabase: return "EmptyDatabase";
    case ErrorCode::kCameraMismatch: return "CameraMismatch";
    case ErrorCode::kTrajectoryTooShort: return "TrajectoryTooShort";
  }
  return "Unknown";
}

std::optional<ErrorCode> error_code_from_string(std::string_view name) {
  for (int c = 0; c <= static_cast<int>(ErrorCode::kTrajectoryTooShort); ++c) {
    if (to_string(static_cast<ErrorCode>(c)) == name) return static_cast<ErrorCode>(c);
  }
  return std::nullopt;
}

}  // namespace gsreloc
