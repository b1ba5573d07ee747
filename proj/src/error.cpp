#include "semcache/error.hpp"

namespace semcache {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMetadataTooLarge: return "MetadataTooLarge";
    case ErrorCode::kEmptyMetadata: return "EmptyMetadata";
    case ErrorCode::kInvalidDescriptor: return "InvalidDescriptor";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kNoMetadataOptions: return "NoMetadataOptions";
    case ErrorCode::kUnparseableMetadata: return "UnparseableMetadata";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMissingSize: return "MissingSizeError";
    case ErrorCode::kMissingType: return "MissingTypeError";
    case ErrorCode::kUnknownEntity: return "UnknownEntity";
    case ErrorCode::kTimeRegression: return "TimeRegression";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUnsortedTrace: return "UnsortedTrace";
    case ErrorCode::kNegativeTime: return "NegativeTime";
    case ErrorCode::kInvalidTrace: return "InvalidTrace";
    case ErrorCode::kEmptyKnowledgeBase: return "EmptyKnowledgeBase";
    case ErrorCode::kInvalidTopology: return "InvalidTopology";
    case ErrorCode::kScenarioMismatch: return "ScenarioMismatch";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace semcache
