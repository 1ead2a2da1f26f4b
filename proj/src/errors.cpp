#include "chengap/errors.hpp"

namespace chengap {

std::string_view toString(ErrorCode code) {
  switch (code) {
    case ErrorCode::AmbientTooSmall: return "AmbientTooSmall";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::ShapeCountMismatch: return "ShapeCountMismatch";
    case ErrorCode::ShapeSizeMismatch: return "ShapeSizeMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::Asymmetric: return "Asymmetric";
    case ErrorCode::DegeneratePlane: return "DegeneratePlane";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::AOutOfRange: return "AOutOfRange";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::NotTangent: return "NotTangent";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::UnknownBuiltin: return "UnknownBuiltin";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace chengap
