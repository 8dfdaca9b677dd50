#include "usab/error.hpp"

namespace usab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingHeader: return "MissingHeader";
    case ErrorCode::UnknownQuestionColumn: return "UnknownQuestionColumn";
    case ErrorCode::OutOfRangeResponse: return "OutOfRangeResponse";
    case ErrorCode::DuplicateRespondentId: return "DuplicateRespondentId";
    case ErrorCode::MissingResponse: return "MissingResponse";
    case ErrorCode::InconsistentCounts: return "InconsistentCounts";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyBands: return "EmptyBands";
    case ErrorCode::NonMonotoneBands: return "NonMonotoneBands";
    case ErrorCode::WrongGeneCount: return "WrongGeneCount";
    case ErrorCode::NegativeObjective: return "NegativeObjective";
    case ErrorCode::ZeroTotalFitness: return "ZeroTotalFitness";
    case ErrorCode::GeneCountMismatch: return "GeneCountMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingleClassInput: return "SingleClassInput";
    case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::FeatureUniverseMismatch: return "FeatureUniverseMismatch";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::EmptyRuns: return "EmptyRuns";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

bool is_data_error(ErrorCode code) noexcept {
  return code != ErrorCode::Internal;
}

}  // namespace usab
