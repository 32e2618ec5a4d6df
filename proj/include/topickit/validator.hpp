#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "topickit/document.hpp"

namespace topickit {

enum class Severity { kError, kWarning };

enum class FindingCode {
  kOddBackslash,
  kEmptyAlternative,
  kCompileFail,
  kBannedSyntax,
  kTestFail,
  kRtlUnwrapped,
};

std::string_view to_string(Severity s);
std::string_view to_string(FindingCode c);

struct Finding {
  Severity severity = Severity::kError;
  FindingCode code = FindingCode::kCompileFail;
  // Exactly one of these is set: a byte offset into the checked string, or a
  // test reference such as "must_not_match[2]".
  std::optional<std::size_t> offset;
  std::string test;
  std::string message;

  friend bool operator==(const Finding&, const Finding&) = default;
};

struct BanRule {
  std::string name;
  std::string pattern;  // live regex, matched at syntax positions only

  friend bool operator==(const BanRule&, const BanRule&) = default;
};

// Lookbehind, possessive quantifiers, recursion and inline flag groups.
std::vector<BanRule> default_banlist();

// JSON array of {"name": ..., "pattern": ...}. Throws
// Error(kMalformedDocument) on schema problems and Error(kCompileFail) for a
// rule pattern the engine rejects.
std::vector<BanRule> parse_banlist(std::string_view json_bytes);

// Checks a stored-form (doubled backslash) regex. Offsets refer to the
// stored string.
std::vector<Finding> validate_stored(std::string_view stored,
                                     const std::vector<BanRule>& banlist = default_banlist());

// Checks the compact rendering of `doc` and runs its tests. Offsets refer to
// the compact live rendering.
std::vector<Finding> validate_document(const RegexDocument& doc,
                                       const std::vector<BanRule>& banlist = default_banlist());

bool has_errors(const std::vector<Finding>& findings);

// {"severity":..,"code":..,"location":..,"message":..} on one line.
std::string to_json_line(const Finding& f);

}  // namespace topickit
