#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace topickit {

// Stable error identifiers. The string form (see to_string) is what the CLI
// prints and what tests match on.
enum class ErrorCode {
  kMalformedDocument,
  kInvariantViolation,
  kUnboundedFragment,
  kVariantOverflow,
  kRenderInvalid,
  kLabelCharset,
  kOddBackslash,
  kEmptySet,
  kCompileFail,
  kMatchFailure,
  kIoError,
  kMalformedRow,
  kEmptySelection,
  kUnlabeledDoc,
  kZeroBase,
  kInvalidArgument,
  kAblationInvalid,
  kEmptyBaseline,
  kValidationFailed,
  kVersionConflict,
  kNotFound,
  kTooManyLangs,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string location = {});

  ErrorCode code() const noexcept { return code_; }
  // Line/field/row location when known, empty otherwise.
  const std::string& location() const noexcept { return location_; }

 private:
  ErrorCode code_;
  std::string location_;
};

}  // namespace topickit
