#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace topickit {

enum class Tier { kTier1, kTier2 };

std::string_view to_string(Tier tier);
// Accepts "tier1" / "tier2". Throws Error(kInvalidArgument) otherwise.
Tier parse_tier(std::string_view text);

inline constexpr std::string_view kDefaultPrefixGuard = R"((\b|\d|_|#))";
inline constexpr std::string_view kDefaultSuffixGuard = R"((\b|\d|_))";
inline constexpr int kDefaultMaxGap = 80;
inline constexpr int kMaxGapLimit = 1000;

// A raw regex fragment used verbatim.
struct LiteralClause {
  std::string pattern;

  friend bool operator==(const LiteralClause&, const LiteralClause&) = default;
};

// One word with boundary guards and an optional exclusion lookahead.
struct KeywordClause {
  std::string core;
  std::string prefix_guard{kDefaultPrefixGuard};
  std::string suffix_guard{kDefaultSuffixGuard};
  std::vector<std::string> exclusions;

  friend bool operator==(const KeywordClause&, const KeywordClause&) = default;
};

// Any word of set_a within max_gap characters of any word of set_b.
struct BipartiteClause {
  std::vector<std::string> set_a;
  std::vector<std::string> set_b;
  int max_gap = kDefaultMaxGap;
  bool ordered_both_ways = true;

  friend bool operator==(const BipartiteClause&, const BipartiteClause&) = default;
};

using Clause = std::variant<LiteralClause, KeywordClause, BipartiteClause>;

struct Section {
  std::string label;
  std::vector<Clause> clauses;

  friend bool operator==(const Section&, const Section&) = default;
};

struct TestSuite {
  std::vector<std::string> must_match;
  std::vector<std::string> must_not_match;

  friend bool operator==(const TestSuite&, const TestSuite&) = default;
};

// Source form of one (topic, language, tier) regex. Fragments are stored in
// live form with single backslashes.
struct RegexDocument {
  std::string topic;
  std::string language;
  Tier tier = Tier::kTier1;
  int version = 1;
  std::vector<Section> sections;
  TestSuite tests;

  friend bool operator==(const RegexDocument&, const RegexDocument&) = default;
};

// Checks every structural invariant. Throws Error(kInvariantViolation) whose
// location is a JSON pointer to the offending field ("/sections/1/label").
void check_invariants(const RegexDocument& doc);

// Wraps RTL words in fragments (see wrap_rtl_words) and checks invariants.
// Documents produced by parse_document are already in this form.
RegexDocument make_document(RegexDocument draft);

// Throws Error(kMalformedDocument) for syntax/type/schema problems and
// Error(kInvariantViolation) for semantic ones.
RegexDocument parse_document(std::string_view bytes);

// Canonical UTF-8 JSON: fixed key order, two-space indent, LF, trailing LF.
std::string serialize_document(const RegexDocument& doc);

// Parenthesizes each run of right-to-left letters that is not already the
// sole content of a group. Runs followed by a quantifier keep their last
// character outside the group so matching is unchanged.
std::string wrap_rtl_words(std::string_view fragment);

// Byte offsets of RTL runs that wrap_rtl_words would wrap.
std::vector<std::size_t> unwrapped_rtl_offsets(std::string_view pattern);

}  // namespace topickit
