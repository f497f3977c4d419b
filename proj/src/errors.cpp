#include "mtk/errors.hpp"

namespace mtk {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::CarrierTooLarge: return "CARRIER_TOO_LARGE";
    case ErrorCode::TensorTooLarge: return "TENSOR_TOO_LARGE";
    case ErrorCode::NotDualRing: return "NOT_DUAL_RING";
    case ErrorCode::NotAUnit: return "NOT_A_UNIT";
    case ErrorCode::SizeMismatch: return "SIZE_MISMATCH";
    case ErrorCode::RelationNotPreserved: return "RELATION_NOT_PRESERVED";
    case ErrorCode::InfiniteGroup: return "INFINITE_GROUP";
    case ErrorCode::NoHalf: return "NO_HALF";
    case ErrorCode::SkippedNotStable: return "SKIPPED_NOT_STABLE";
    case ErrorCode::Overflow: return "OVERFLOW";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

ParseError::ParseError(std::size_t position, const std::string& message)
    : Error(ErrorCode::ParseError, message + " at position " + std::to_string(position)), position_(position) {}

RelationNotPreserved::RelationNotPreserved(std::size_t relation_index, const std::string& message)
    : Error(ErrorCode::RelationNotPreserved, message + " (relation " + std::to_string(relation_index) + ")"),
      relation_index_(relation_index) {}

}  // namespace mtk
