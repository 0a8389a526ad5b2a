#include "relulab/error.hpp"

namespace relulab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingCell: return "MissingCell";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DuplicateCell: return "DuplicateCell";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::InvalidName: return "InvalidName";
    case ErrorCode::InvalidBounds: return "InvalidBounds";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::InfiniteInputBounds: return "InfiniteInputBounds";
    case ErrorCode::NegativeWeightRejected: return "NegativeWeightRejected";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
  }
  return "Unknown";
}

}  // namespace relulab
