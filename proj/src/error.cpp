#include "topickit/error.hpp"

namespace topickit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedDocument: return "MALFORMED_DOCUMENT";
    case ErrorCode::kInvariantViolation: return "INVARIANT_VIOLATION";
    case ErrorCode::kUnboundedFragment: return "UNBOUNDED_FRAGMENT";
    case ErrorCode::kVariantOverflow: return "VARIANT_OVERFLOW";
    case ErrorCode::kRenderInvalid: return "RENDER_INVALID";
    case ErrorCode::kLabelCharset: return "LABEL_CHARSET";
    case ErrorCode::kOddBackslash: return "ODD_BACKSLASH";
    case ErrorCode::kEmptySet: return "EMPTY_SET";
    case ErrorCode::kCompileFail: return "COMPILE_FAIL";
    case ErrorCode::kMatchFailure: return "MATCH_FAILURE";
    case ErrorCode::kIoError: return "IO_ERROR";
    case ErrorCode::kMalformedRow: return "MALFORMED_ROW";
    case ErrorCode::kEmptySelection: return "EMPTY_SELECTION";
    case ErrorCode::kUnlabeledDoc: return "UNLABELED_DOC";
    case ErrorCode::kZeroBase: return "ZERO_BASE";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kAblationInvalid: return "ABLATION_INVALID";
    case ErrorCode::kEmptyBaseline: return "EMPTY_BASELINE";
    case ErrorCode::kValidationFailed: return "VALIDATION_FAILED";
    case ErrorCode::kVersionConflict: return "VERSION_CONFLICT";
    case ErrorCode::kNotFound: return "NOT_FOUND";
    case ErrorCode::kTooManyLangs: return "TOO_MANY_LANGS";
  }
  return "UNKNOWN";
}

namespace {
std::string compose(ErrorCode code, const std::string& message,
                    const std::string& location) {
  std::string out(to_string(code));
  if (!location.empty()) out += " at " + location;
  if (!message.empty()) out += ": " + message;
  return out;
}
}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::string location)
    : std::runtime_error(compose(code, message, location)),
      code_(code),
      location_(std::move(location)) {}

}  // namespace topickit
