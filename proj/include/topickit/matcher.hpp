#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "topickit/engine.hpp"

namespace topickit {

inline constexpr int kDefaultSnippetCap = 30;

struct Customization {
  std::optional<int> first_k_lines;
  std::optional<int> first_k_words;
  std::vector<std::string> strip_patterns;
  std::vector<std::string> negative_regexes;
  std::vector<std::string> discount_snippet_patterns;
  int snippet_cap = kDefaultSnippetCap;

  friend bool operator==(const Customization&, const Customization&) = default;
};

// Throws Error(kInvalidArgument) when snippet_cap < 1, a first-k value is
// below 1, or both first-k options are set.
void check_customization(const Customization& c);

// JSON object with optional keys first_k_lines, first_k_words,
// strip_patterns, negative_regexes, discount_snippet_patterns, snippet_cap.
// Throws Error(kMalformedDocument) for unknown keys or wrong types.
Customization parse_customization(std::string_view json_bytes);

struct MatchReport {
  bool matched = false;
  std::vector<std::string> snippets;
  bool vetoed = false;

  friend bool operator==(const MatchReport&, const MatchReport&) = default;
};

// Matches of the main pattern over a preprocessed text, after discounting.
struct ScanResult {
  std::u32string text;
  std::vector<Span> spans;
  bool vetoed = false;
};

// FNV-1a 64 over the live regex bytes, as 16 lowercase hex digits.
std::string fingerprint_of(std::string_view live);

// True when the regex contains an inline flag group such as "(?i)" or
// "(?s:...)". Flags would change case or newline semantics behind the
// matcher's back.
bool has_inline_flags(std::string_view live);

class CompiledTopicMatcher {
 public:
  // Throws Error(kCompileFail) for regexes the engine rejects or that carry
  // inline flags, and Error(kInvalidArgument) for a bad customization.
  static CompiledTopicMatcher compile(std::string_view live, Customization customization = {});

  const std::string& source() const { return main_.source(); }
  const std::string& fingerprint() const { return fingerprint_; }
  const Customization& customization() const { return customization_; }

  // Case fold, strip, truncate.
  std::u32string preprocess32(std::string_view text) const;
  std::string preprocess(std::string_view text) const;

  ScanResult scan(std::string_view text) const;
  MatchReport classify(std::string_view text) const;
  // Early-termination decision; always equals classify(text).matched.
  bool matches(std::string_view text) const;

 private:
  CompiledTopicMatcher(Pattern main, Customization customization);

  bool discounted(std::u32string_view snippet) const;
  bool vetoed(std::u32string_view text) const;

  Pattern main_;
  Customization customization_;
  std::vector<Pattern> strip_;
  std::vector<Pattern> negative_;
  std::vector<Pattern> discount_;
  std::string fingerprint_;
};

inline CompiledTopicMatcher compile(std::string_view live, Customization customization = {}) {
  return CompiledTopicMatcher::compile(live, std::move(customization));
}

inline MatchReport classify(const CompiledTopicMatcher& m, std::string_view text) {
  return m.classify(text);
}

// Preprocessing without a main regex; strip patterns are compiled on the fly.
std::string preprocess(std::string_view text, const Customization& customization);

}  // namespace topickit
