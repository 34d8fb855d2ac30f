#pragma once

#include <stdexcept>
#include <string>

namespace asw {

enum class ErrorCode {
  kEmptyInput,
  kOutOfRange,
  kIncompleteInput,
  kNegativeMultiplicity,
  kInfeasible,
  kResidueMismatch,
  kBudgetExceeded,
  kInfeasiblePermutation,
  kNotFound,
  kBadReduction,
  kBadInput,
  kPrecisionExhausted,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kIncompleteInput: return "IncompleteInput";
    case ErrorCode::kNegativeMultiplicity: return "NegativeMultiplicity";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kResidueMismatch: return "ResidueMismatch";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kInfeasiblePermutation: return "InfeasiblePermutation";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kBadReduction: return "BadReduction";
    case ErrorCode::kBadInput: return "BadInput";
    case ErrorCode::kPrecisionExhausted: return "PrecisionExhausted";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace asw
