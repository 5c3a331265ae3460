#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qss {

enum class ErrorCode {
  InvalidArgument,
  NotPrime,
  ModulusMismatch,
  ZeroInverse,
  DuplicatePoints,
  SingularMatrix,
  ShapeMismatch,
  ShapeCapExceeded,
  EmptyKeepSet,
  NotUnitary,
  DimMismatch,
  NotBijective,
  InvalidState,
  CloningViolation,
  ParticipantCapExceeded,
  NotQualified,
  IsQualified,
  SingularResidual,
  ParamOutOfRange,
  UnknownKind,
  StructureMismatch,
  EmptyFamily,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::ModulusMismatch: return "ModulusMismatch";
    case ErrorCode::ZeroInverse: return "ZeroInverse";
    case ErrorCode::DuplicatePoints: return "DuplicatePoints";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ShapeCapExceeded: return "ShapeCapExceeded";
    case ErrorCode::EmptyKeepSet: return "EmptyKeepSet";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NotBijective: return "NotBijective";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::CloningViolation: return "CloningViolation";
    case ErrorCode::ParticipantCapExceeded: return "ParticipantCapExceeded";
    case ErrorCode::NotQualified: return "NotQualified";
    case ErrorCode::IsQualified: return "IsQualified";
    case ErrorCode::SingularResidual: return "SingularResidual";
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::StructureMismatch: return "StructureMismatch";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qss
