#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gsvdkit {

/// Failure categories raised by the library. The command-line tool maps
/// each category onto a process exit code.
enum class ErrorCode {
  NonFinite,
  DimensionMismatch,
  InvalidDimensions,
  RankOutOfRange,
  RankDeficient,
  NeedsAugmentation,
  NoAugmentationNeeded,
  SingularH,
  NotOrthonormal,
  ZeroDenominator,
  InvalidPartition,
  ZeroWithin,
  DegenerateData,
  UnsupportedBeta,
  DomainError,
  NumericFailure,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gsvdkit
