#include "tafi/error.h"

namespace tafi {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kTruncatedFrame: return "TruncatedFrame";
    case ErrorCode::kUnsupportedColorspace: return "UnsupportedColorspace";
    case ErrorCode::kOutOfBounds: return "OutOfBounds";
    case ErrorCode::kOddGeometry: return "OddGeometry";
    case ErrorCode::kGeometryMismatch: return "GeometryMismatch";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kClipTooShort: return "ClipTooShort";
    case ErrorCode::kFrameTooSmall: return "FrameTooSmall";
    case ErrorCode::kToolFailed: return "ToolFailed";
    case ErrorCode::kInsufficientGroups: return "InsufficientGroups";
    case ErrorCode::kInsufficientSamples: return "InsufficientSamples";
    case ErrorCode::kZeroWithinVariance: return "ZeroWithinVariance";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kEmptyClipList: return "EmptyClipList";
    case ErrorCode::kPatchTooLarge: return "PatchTooLarge";
    case ErrorCode::kEmptyManifest: return "EmptyManifest";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kWriteFailed: return "WriteFailed";
    case ErrorCode::kHeldOutViolation: return "HeldOutViolation";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace tafi
