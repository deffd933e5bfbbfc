#include "servant/error.hpp"

namespace servant {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedRiff: return "MalformedRiff";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::EmptyData: return "EmptyData";
    case ErrorCode::ClipTooShort: return "ClipTooShort";
    case ErrorCode::BadProfile: return "BadProfile";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroK: return "ZeroK";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::TruncatedPixelData: return "TruncatedPixelData";
    case ErrorCode::UnsupportedMaxval: return "UnsupportedMaxval";
    case ErrorCode::DegenerateImage: return "DegenerateImage";
    case ErrorCode::BadSpec: return "BadSpec";
    case ErrorCode::InconsistentDims: return "InconsistentDims";
    case ErrorCode::TooFewExamples: return "TooFewExamples";
    case ErrorCode::ModalityMismatch: return "ModalityMismatch";
    case ErrorCode::ClockSkew: return "ClockSkew";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::ConflictingExamples: return "ConflictingExamples";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BadVersion: return "BadVersion";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::MissingClassifier: return "MissingClassifier";
  }
  return "Unknown";
}

}  // namespace servant
