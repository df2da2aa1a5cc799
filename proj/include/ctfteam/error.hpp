#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ctfteam {

enum class ErrorCode {
  InvalidId,
  InconsistentInput,
  Infeasible,
  Unsupported,
  BoundExceeded,
  InvalidConfig,
  InvalidCode,
  InvalidSwap,
  InvalidInput,
  ParseError,
  MissingRole,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidId: return "InvalidId";
    case ErrorCode::InconsistentInput: return "InconsistentInput";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::BoundExceeded: return "BoundExceeded";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidCode: return "InvalidCode";
    case ErrorCode::InvalidSwap: return "InvalidSwap";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingRole: return "MissingRole";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

// Every failure in the library surfaces as this exception; callers branch on
// code() rather than on the message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when an instance cannot form valid teams. rule() is the violated
// feasibility rule (1-4), or 0 when no single rule applies.
class InfeasibleError : public Error {
 public:
  InfeasibleError(int rule, const std::string& what)
      : Error(ErrorCode::Infeasible, what), rule_(rule) {}

  int rule() const noexcept { return rule_; }

 private:
  int rule_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::size_t col, const std::string& what)
      : Error(ErrorCode::ParseError, what), row_(row), col_(col) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

}  // namespace ctfteam
