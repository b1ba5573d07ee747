#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace semcache {

enum class ErrorCode {
  // metadata codec
  kMetadataTooLarge,
  kEmptyMetadata,
  kInvalidDescriptor,
  kMalformedHeader,
  kNoMetadataOptions,
  kUnparseableMetadata,
  // knowledge base
  kParseError,
  kMissingSize,
  kMissingType,
  kUnknownEntity,
  // cache
  kTimeRegression,
  kInvalidArgument,
  // simulation / workload
  kUnsortedTrace,
  kNegativeTime,
  kInvalidTrace,
  kEmptyKnowledgeBase,
  kInvalidTopology,
  // experiments
  kScenarioMismatch,
  kConfigError,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this exception. `line()` is
// non-zero when the failure can be pinned to a line of an input file.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::size_t line = 0)
      : std::runtime_error(what), code_(code), line_(line) {}

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::size_t line_;
};

}  // namespace semcache
