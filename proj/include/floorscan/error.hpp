#pragma once

#include <stdexcept>
#include <string>

namespace floorscan {

enum class ErrorCode {
  kIo,               // unreadable or unwritable file
  kParse,            // malformed input record
  kInvalidArgument,  // precondition on parameters violated
  kEmptyInput,       // nothing to operate on
  kNoFloorEvidence,  // no upward-facing triangles to level against
  kSingleSurface,    // histogram lacks a floor/ceiling gap
  kDegenerateWall,   // wall segment with zero lateral or vertical extent
  kSelfIntersecting, // room polygon crosses itself
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Failure inside a named pipeline stage; the CLI maps this to exit code 3.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.code(), stage + ": " + cause.what()), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace floorscan
