#pragma once

#include <iosfwd>

#include "gsvdkit/errors.hpp"

namespace gsvdkit::cli {

enum ExitCode : int {
  kOk = 0,
  kParse = 2,
  kDimension = 3,
  kRank = 4,
  kNumeric = 5,
};

int exit_code_for(ErrorCode code) noexcept;

/// Entry point of the `gsvdkit` tool. Normal output goes to `out`,
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gsvdkit::cli
