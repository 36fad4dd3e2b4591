#include "historian/errors.hpp"

namespace historian {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::ContextMisaligned: return "ContextMisaligned";
    case ErrorCode::ApplyFailed: return "ApplyFailed";
    case ErrorCode::MultiMethod: return "MultiMethod";
    case ErrorCode::NoEnclosingMethod: return "NoEnclosingMethod";
    case ErrorCode::ManifestUnreadable: return "ManifestUnreadable";
    case ErrorCode::InsufficientTools: return "InsufficientTools";
    case ErrorCode::MissingRepresentation: return "MissingRepresentation";
    case ErrorCode::UnknownConfig: return "UnknownConfig";
    case ErrorCode::BadTemplate: return "BadTemplate";
    case ErrorCode::BackendUnreachable: return "BackendUnreachable";
    case ErrorCode::MockMiss: return "MockMiss";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::FallbackUnavailable: return "FallbackUnavailable";
    case ErrorCode::EmptyBag: return "EmptyBag";
    case ErrorCode::OverridePairUnknown: return "OverridePairUnknown";
    case ErrorCode::MissingTruth: return "MissingTruth";
    case ErrorCode::EmptyEvaluation: return "EmptyEvaluation";
    case ErrorCode::EmptyCoveredSet: return "EmptyCoveredSet";
    case ErrorCode::UnresolvedResiduals: return "UnresolvedResiduals";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace historian
