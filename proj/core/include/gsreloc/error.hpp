#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gsreloc {

enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kOutOfBounds,
  kIo,
  kDegenerate,
  kInsufficientMatches,
  kInsufficientDepth,
  kCheiralityViolation,
  kNoPositiveDepth,
  kSingular,
  kNoConsensus,
  kEmptyDatabase,
  kCameraMismatch,
  kTrajectoryTooShort,
};

std::string_view to_string(ErrorCode code) noexcept;
// Inverse of to_string; nullopt for unknown names.
std::optional<ErrorCode> error_code_from_string(std::string_view name);

// Every failure raised by the library carries a machine-readable code so
// callers (the relocalizer, the CLI batch runner) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gsreloc
