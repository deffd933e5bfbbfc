#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace servant {

enum class ErrorCode {
  // audio
  MalformedRiff,
  UnsupportedFormat,
  EmptyData,
  ClipTooShort,
  BadProfile,
  // clustering
  TooFewPoints,
  DimensionMismatch,
  ZeroK,
  InvalidParams,
  // vision
  BadMagic,
  BadHeader,
  TruncatedPixelData,
  UnsupportedMaxval,
  DegenerateImage,
  BadSpec,
  // scene model
  InconsistentDims,
  TooFewExamples,
  ModalityMismatch,
  // fusion
  ClockSkew,
  InvalidConfig,
  // action learning
  UnknownLabel,
  ConflictingExamples,
  EmptyTrainingSet,
  // persistence
  IoError,
  BadVersion,
  SchemaError,
  MissingClassifier,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace servant
