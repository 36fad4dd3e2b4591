#pragma once

#include <stdexcept>
#include <string>

namespace historian {

enum class ErrorCode {
  // diff / corpus
  MalformedHeader,
  CountMismatch,
  ContextMisaligned,
  ApplyFailed,
  MultiMethod,
  NoEnclosingMethod,
  ManifestUnreadable,
  // refset
  InsufficientTools,
  // promptkit
  MissingRepresentation,
  UnknownConfig,
  BadTemplate,
  // oracle
  BackendUnreachable,
  MockMiss,
  InvalidLabel,
  // labelparse
  FallbackUnavailable,
  // clonedet
  EmptyBag,
  OverridePairUnknown,
  // metrics
  MissingTruth,
  EmptyEvaluation,
  EmptyCoveredSet,
  UnresolvedResiduals,
  LengthMismatch,
  // harness / general
  ConfigError,
  IoError,
};

const char* error_code_name(ErrorCode code);

/// Library-wide exception: a code identifying the failure class plus a
/// human-readable detail string.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace historian
