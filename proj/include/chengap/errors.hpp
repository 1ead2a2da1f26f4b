#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chengap {

enum class ErrorCode {
  AmbientTooSmall,
  DimensionTooSmall,
  ShapeCountMismatch,
  ShapeSizeMismatch,
  NonFinite,
  Asymmetric,
  DegeneratePlane,
  ZeroVector,
  NotApplicable,
  AOutOfRange,
  DimensionTooLarge,
  NotTangent,
  RankDeficient,
  InvalidParameter,
  UnknownBuiltin,
  ParseError,
};

std::string_view toString(ErrorCode code);

// All library failures surface as this exception; the code is stable and
// machine-checkable, the message is for humans.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(toString(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace chengap
