#ifndef TAFI_ERROR_H_
#define TAFI_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace tafi {

enum class ErrorCode {
  kMalformedHeader,
  kTruncatedFrame,
  kUnsupportedColorspace,
  kOutOfBounds,
  kOddGeometry,
  kGeometryMismatch,
  kInvalidSpec,
  kClipTooShort,
  kFrameTooSmall,
  kToolFailed,
  kInsufficientGroups,
  kInsufficientSamples,
  kZeroWithinVariance,
  kZeroVariance,
  kDomainError,
  kEmptyClipList,
  kPatchTooLarge,
  kEmptyManifest,
  kMissingFile,
  kWriteFailed,
  kHeldOutViolation,
  kParseError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Single exception type for the toolkit; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tafi

#endif  // TAFI_ERROR_H_
