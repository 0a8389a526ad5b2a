#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace relulab {

enum class ErrorCode {
  MissingCell,
  IndexOutOfRange,
  DuplicateCell,
  ParseError,
  IoError,
  DuplicateName,
  InvalidName,
  InvalidBounds,
  UnknownVariable,
  NumericalBreakdown,
  InfiniteInputBounds,
  NegativeWeightRejected,
  BudgetExceeded,
  PreconditionViolated,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (and the CLI exit-code mapping) can branch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace relulab
