#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace latfit {

enum class ErrorCode {
  kSingularMatrix,
  kRankDeficient,
  kDependentRows,
  kPrecisionLoss,
  kDegenerateInput,
  kDimensionMismatch,
  kNoCandidate,
  kNoInvertibleBlock,
  kParseError,
  kInvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (the sweep driver, the CLI) can report it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSingularMatrix:
      return "SingularMatrix";
    case ErrorCode::kRankDeficient:
      return "RankDeficient";
    case ErrorCode::kDependentRows:
      return "DependentRows";
    case ErrorCode::kPrecisionLoss:
      return "PrecisionLoss";
    case ErrorCode::kDegenerateInput:
      return "DegenerateInput";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kNoCandidate:
      return "NoCandidate";
    case ErrorCode::kNoInvertibleBlock:
      return "NoInvertibleBlock";
    case ErrorCode::kParseError:
      return "ParseError";
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace latfit
