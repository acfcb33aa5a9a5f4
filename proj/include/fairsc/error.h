#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fairsc {

enum class ErrorCode {
  kParse,
  kIndex,
  kDuplicateEdge,
  kNegativeWeight,
  kSelfLoop,
  kEmptyCluster,
  kZeroVolume,
  kSingleGroup,
  kNotSymmetric,
  kConvergenceFailure,
  kNotPositiveDefinite,
  kInvalidK,
  kIsolatedVertex,
  kConfig,
  kUnbalanced,
  kIndivisible,
  kUnsupportedGroupCount,
  kLengthMismatch,
  kKMismatch,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported through this exception; `code()` lets
// callers (the CLI in particular) map failures to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fairsc
