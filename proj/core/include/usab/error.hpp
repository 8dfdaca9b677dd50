#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace usab {

enum class ErrorCode {
  // Input data problems. Surfaced by the CLI as exit code 2.
  MissingHeader,
  UnknownQuestionColumn,
  OutOfRangeResponse,
  DuplicateRespondentId,
  MissingResponse,
  InconsistentCounts,
  IoError,
  ParseError,
  // Contract violations on arguments.
  InvalidArgument,
  EmptyBands,
  NonMonotoneBands,
  WrongGeneCount,
  NegativeObjective,
  ZeroTotalFitness,
  GeneCountMismatch,
  DimensionMismatch,
  SingleClassInput,
  NonFiniteFeature,
  EmptyGrid,
  InvalidRange,
  EmptyMask,
  FeatureUniverseMismatch,
  ClassTooSmall,
  TooFewSamples,
  LengthMismatch,
  UnknownClass,
  EmptyMatrix,
  EmptyRuns,
  // Anything that indicates a bug rather than bad input.
  Internal,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for codes caused by the data or configuration a user supplied.
bool is_data_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

/// Raised by the pipeline orchestrator; names the stage that failed first.
class StageError : public Error {
 public:
  StageError(std::string stage, ErrorCode code, const std::string& message)
      : Error(code, "stage '" + stage + "': " + message), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace usab
