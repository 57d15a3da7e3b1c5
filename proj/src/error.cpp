#include "gs/error.hpp"

namespace gs {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnboundedTail: return "UnboundedTail";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::NotLocallyFinite: return "NotLocallyFinite";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::MissingDegree: return "MissingDegree";
    case ErrorCode::NegativeInput: return "NegativeInput";
    case ErrorCode::NotAnEigenvector: return "NotAnEigenvector";
    case ErrorCode::NotLowerBounded: return "NotLowerBounded";
    case ErrorCode::ShiftTooSmall: return "ShiftTooSmall";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::IndexMismatch: return "IndexMismatch";
    case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorCode::NegativePerturbation: return "NegativePerturbation";
    case ErrorCode::NotNonnegative: return "NotNonnegative";
    case ErrorCode::SelectionFailure: return "SelectionFailure";
    case ErrorCode::ZeroWeight: return "ZeroWeight";
    case ErrorCode::SpecParse: return "SpecParse";
  }
  return "Unknown";
}

}  // namespace gs
