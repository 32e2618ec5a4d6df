#include "topickit/matcher.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_set>

#include <fmt/format.h>

#include "json.hpp"
#include "topickit/error.hpp"
#include "topickit/regex_syntax.hpp"
#include "topickit/unicode.hpp"

namespace topickit {
namespace {

std::vector<Pattern> compile_all(const std::vector<std::string>& regexes, const char* what) {
  std::vector<Pattern> out;
  out.reserve(regexes.size());
  for (std::size_t i = 0; i < regexes.size(); ++i) {
    if (has_inline_flags(regexes[i])) {
      throw Error(ErrorCode::kCompileFail, "inline flag group", fmt::format("{}[{}]", what, i));
    }
    try {
      out.push_back(Pattern::compile(regexes[i]));
    } catch (const Error& e) {
      throw Error(ErrorCode::kCompileFail, e.what(), fmt::format("{}[{}]", what, i));
    }
  }
  return out;
}

std::u32string first_lines(std::u32string text, int k) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == U'\n' && ++seen == static_cast<std::size_t>(k)) {
      text.resize(i);
      break;
    }
  }
  return text;
}

// Keeps everything up to the end of the k-th whitespace-separated word.
std::u32string first_words(std::u32string text, int k) {
  std::size_t words = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && unicode::is_whitespace(text[i])) ++i;
    if (i == text.size()) break;
    while (i < text.size() && !unicode::is_whitespace(text[i])) ++i;
    if (++words == static_cast<std::size_t>(k)) {
      text.resize(i);
      break;
    }
  }
  return text;
}

std::u32string preprocess_with(std::string_view text, const Customization& c,
                               const std::vector<Pattern>& strip) {
  std::u32string out = unicode::to_utf32(unicode::case_fold(text));
  for (const auto& p : strip) out = p.remove_all(out);
  if (c.first_k_lines) out = first_lines(std::move(out), *c.first_k_lines);
  if (c.first_k_words) out = first_words(std::move(out), *c.first_k_words);
  return out;
}

}  // namespace

void check_customization(const Customization& c) {
  if (c.snippet_cap < 1) throw Error(ErrorCode::kInvalidArgument, "snippet_cap must be >= 1");
  if (c.first_k_lines && c.first_k_words) {
    throw Error(ErrorCode::kInvalidArgument, "first_k_lines and first_k_words are exclusive");
  }
  if ((c.first_k_lines && *c.first_k_lines < 1) || (c.first_k_words && *c.first_k_words < 1)) {
    throw Error(ErrorCode::kInvalidArgument, "first-k truncation needs k >= 1");
  }
}

Customization parse_customization(std::string_view json_bytes) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_bytes);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedDocument, e.what(), "byte " + std::to_string(e.byte));
  }
  if (!j.is_object()) throw Error(ErrorCode::kMalformedDocument, "expected an object", "/");
  Customization c;
  auto strings = [](const json& v, const std::string& key) {
    if (!v.is_array()) throw Error(ErrorCode::kMalformedDocument, "expected an array", "/" + key);
    std::vector<std::string> out;
    for (const auto& s : v) {
      if (!s.is_string()) {
        throw Error(ErrorCode::kMalformedDocument, "expected a string", "/" + key);
      }
      out.push_back(s.get<std::string>());
    }
    return out;
  };
  auto integer = [](const json& v, const std::string& key) {
    if (!v.is_number_integer()) {
      throw Error(ErrorCode::kMalformedDocument, "expected an integer", "/" + key);
    }
    return v.get<int>();
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "first_k_lines") {
      c.first_k_lines = integer(value, key);
    } else if (key == "first_k_words") {
      c.first_k_words = integer(value, key);
    } else if (key == "snippet_cap") {
      c.snippet_cap = integer(value, key);
    } else if (key == "strip_patterns") {
      c.strip_patterns = strings(value, key);
    } else if (key == "negative_regexes") {
      c.negative_regexes = strings(value, key);
    } else if (key == "discount_snippet_patterns") {
      c.discount_snippet_patterns = strings(value, key);
    } else {
      throw Error(ErrorCode::kMalformedDocument, "unknown key", "/" + key);
    }
  }
  check_customization(c);
  return c;
}

std::string fingerprint_of(std::string_view live) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : live) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

bool has_inline_flags(std::string_view live) {
  const auto positions = syntax::syntax_positions(live);
  for (std::size_t i = 0; i + 2 < live.size(); ++i) {
    if (!positions[i] || live[i] != '(' || live[i + 1] != '?') continue;
    std::size_t j = i + 2;
    while (j < live.size() && std::string_view("imsxnUJ-^").find(live[j]) != std::string_view::npos) {
      ++j;
    }
    if (j > i + 2 && j < live.size() && (live[j] == ')' || live[j] == ':')) return true;
  }
  return false;
}

CompiledTopicMatcher::CompiledTopicMatcher(Pattern main, Customization customization)
    : main_(std::move(main)),
      customization_(std::move(customization)),
      strip_(compile_all(customization_.strip_patterns, "strip_patterns")),
      negative_(compile_all(customization_.negative_regexes, "negative_regexes")),
      discount_(compile_all(customization_.discount_snippet_patterns, "discount_snippet_patterns")),
      fingerprint_(fingerprint_of(main_.source())) {}

CompiledTopicMatcher CompiledTopicMatcher::compile(std::string_view live,
                                                   Customization customization) {
  check_customization(customization);
  if (has_inline_flags(live)) throw Error(ErrorCode::kCompileFail, "inline flag group");
  return CompiledTopicMatcher(Pattern::compile(live), std::move(customization));
}

std::u32string CompiledTopicMatcher::preprocess32(std::string_view text) const {
  return preprocess_with(text, customization_, strip_);
}

std::string CompiledTopicMatcher::preprocess(std::string_view text) const {
  return unicode::to_utf8(preprocess32(text));
}

bool CompiledTopicMatcher::discounted(std::u32string_view snippet) const {
  return std::any_of(discount_.begin(), discount_.end(),
                     [&](const Pattern& p) { return p.search(snippet); });
}

bool CompiledTopicMatcher::vetoed(std::u32string_view text) const {
  return std::any_of(negative_.begin(), negative_.end(),
                     [&](const Pattern& p) { return p.search(text); });
}

ScanResult CompiledTopicMatcher::scan(std::string_view text) const {
  ScanResult r;
  r.text = preprocess32(text);
  r.vetoed = vetoed(r.text);
  for (const Span& s : main_.find_all(r.text)) {
    const std::u32string_view snippet(r.text.data() + s.begin, s.size());
    if (!discounted(snippet)) r.spans.push_back(s);
  }
  return r;
}

MatchReport CompiledTopicMatcher::classify(std::string_view text) const {
  const ScanResult scanned = scan(text);
  MatchReport report;
  std::unordered_set<std::u32string_view> seen;
  std::vector<std::u32string_view> kept;
  for (const Span& s : scanned.spans) {
    const std::u32string_view snippet(scanned.text.data() + s.begin, s.size());
    if (seen.insert(snippet).second) kept.push_back(snippet);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](auto a, auto b) { return a.size() < b.size(); });
  if (kept.size() > static_cast<std::size_t>(customization_.snippet_cap)) {
    kept.resize(static_cast<std::size_t>(customization_.snippet_cap));
  }
  for (auto snippet : kept) report.snippets.push_back(unicode::to_utf8(snippet));
  report.vetoed = scanned.vetoed;
  report.matched = !scanned.vetoed && !kept.empty();
  return report;
}

bool CompiledTopicMatcher::matches(std::string_view text) const {
  const std::u32string t = preprocess32(text);
  if (vetoed(t)) return false;
  if (discount_.empty()) return main_.search(t);
  std::size_t from = 0;
  while (auto m = main_.find(t, from)) {
    if (!discounted(std::u32string_view(t.data() + m->begin, m->size()))) return true;
    from = m->end;
  }
  return false;
}

std::string preprocess(std::string_view text, const Customization& customization) {
  check_customization(customization);
  return unicode::to_utf8(
      preprocess_with(text, customization, compile_all(customization.strip_patterns, "strip_patterns")));
}

}  // namespace topickit
