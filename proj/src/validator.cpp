#include "topickit/validator.hpp"

#include <algorithm>
#include <tuple>

#include <fmt/format.h>

#include "json.hpp"
#include "topickit/engine.hpp"
#include "topickit/error.hpp"
#include "topickit/matcher.hpp"
#include "topickit/regex_syntax.hpp"
#include "topickit/render.hpp"
#include "topickit/unicode.hpp"

namespace topickit {
namespace {

using OffsetMap = std::vector<std::size_t>;

std::size_t map_offset(const OffsetMap& map, std::size_t live_offset, std::size_t stored_size) {
  return live_offset < map.size() ? map[live_offset] : stored_size;
}

Finding at(FindingCode code, std::size_t offset, std::string message,
           Severity severity = Severity::kError) {
  Finding f;
  f.severity = severity;
  f.code = code;
  f.offset = offset;
  f.message = std::move(message);
  return f;
}

// Byte offset of each code point, plus one past the end.
std::vector<std::size_t> codepoint_byte_offsets(std::string_view utf8) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < utf8.size(); ++i) {
    if ((static_cast<unsigned char>(utf8[i]) & 0xC0) != 0x80) out.push_back(i);
  }
  out.push_back(utf8.size());
  return out;
}

void check_empty_alternatives(std::string_view live, const std::vector<bool>& syntax,
                              const OffsetMap& map, std::size_t stored_size,
                              std::vector<Finding>& out) {
  auto is = [&](std::size_t i, char c) { return i < live.size() && syntax[i] && live[i] == c; };
  if (is(0, '|')) {
    out.push_back(at(FindingCode::kEmptyAlternative, map_offset(map, 0, stored_size),
                     "regex starts with an empty alternative"));
  }
  for (std::size_t i = 0; i + 1 < live.size(); ++i) {
    const bool pair = (is(i, '|') && is(i + 1, '|')) || (is(i, '(') && is(i + 1, '|')) ||
                      (is(i, '|') && is(i + 1, ')'));
    if (pair) {
      out.push_back(at(FindingCode::kEmptyAlternative, map_offset(map, i, stored_size),
                       fmt::format("empty alternative \"{}\"", live.substr(i, 2))));
    }
  }
  if (live.size() > 1 && is(live.size() - 1, '|') && !is(live.size() - 2, '|')) {
    out.push_back(at(FindingCode::kEmptyAlternative, map_offset(map, live.size() - 1, stored_size),
                     "regex ends with an empty alternative"));
  }
}

void check_banned(std::string_view live, const std::vector<bool>& syntax,
                  const std::vector<BanRule>& banlist, const OffsetMap& map,
                  std::size_t stored_size, std::vector<Finding>& out) {
  const std::u32string text = unicode::to_utf32(live);
  const auto bytes = codepoint_byte_offsets(live);
  for (const auto& rule : banlist) {
    const Pattern p = Pattern::compile(rule.pattern);
    std::size_t from = 0;
    while (auto m = p.find(text, from)) {
      const std::size_t byte = bytes[m->begin];
      if (byte < syntax.size() && syntax[byte]) {
        out.push_back(at(FindingCode::kBannedSyntax, map_offset(map, byte, stored_size),
                         fmt::format("banned syntax: {}", rule.name)));
      }
      from = m->begin + 1;
    }
  }
}

// Checks shared by stored strings and document renderings. `map` takes a live
// offset to the reported offset.
void check_live(std::string_view live, const std::vector<BanRule>& banlist, const OffsetMap& map,
                std::size_t stored_size, std::vector<Finding>& out) {
  if (auto err = compile_error(live)) {
    out.push_back(at(FindingCode::kCompileFail, map_offset(map, err->offset, stored_size),
                     err->message));
  }
  const auto syntax = syntax::syntax_positions(live);
  check_empty_alternatives(live, syntax, map, stored_size, out);
  check_banned(live, syntax, banlist, map, stored_size, out);
  for (std::size_t offset : unwrapped_rtl_offsets(live)) {
    out.push_back(at(FindingCode::kRtlUnwrapped, map_offset(map, offset, stored_size),
                     "right-to-left word is not parenthesized", Severity::kWarning));
  }
}

int test_rank(const std::string& test) { return test.starts_with("must_match") ? 0 : 1; }

std::size_t test_index(const std::string& test) {
  const auto open = test.find('[');
  return open == std::string::npos ? 0 : std::stoul(test.substr(open + 1));
}

void sort_findings(std::vector<Finding>& findings) {
  auto key = [](const Finding& f) {
    return std::make_tuple(f.offset ? 0 : 1, f.offset.value_or(0), test_rank(f.test),
                           test_index(f.test), static_cast<int>(f.code), f.message);
  };
  std::stable_sort(findings.begin(), findings.end(),
                   [&](const Finding& a, const Finding& b) { return key(a) < key(b); });
  findings.erase(std::unique(findings.begin(), findings.end()), findings.end());
}

}  // namespace

std::string_view to_string(Severity s) { return s == Severity::kError ? "ERROR" : "WARNING"; }

std::string_view to_string(FindingCode c) {
  switch (c) {
    case FindingCode::kOddBackslash: return "ODD_BACKSLASH";
    case FindingCode::kEmptyAlternative: return "EMPTY_ALTERNATIVE";
    case FindingCode::kCompileFail: return "COMPILE_FAIL";
    case FindingCode::kBannedSyntax: return "BANNED_SYNTAX";
    case FindingCode::kTestFail: return "TEST_FAIL";
    case FindingCode::kRtlUnwrapped: return "RTL_UNWRAPPED";
  }
  return "UNKNOWN";
}

std::vector<BanRule> default_banlist() {
  return {
      {"lookbehind", R"(\(\?<[=!])"},
      {"possessive quantifier", R"([*+?}]\+)"},
      {"recursion", R"(\(\?(R|[+-]?[0-9]+|&|P>))"},
      {"inline flag group", R"(\(\?(\^|[imsxnUJ])[imsxnUJ]*(-[imsxnUJ]*)?[:)]|\(\?-[imsxnUJ]+[:)])"},
  };
}

std::vector<BanRule> parse_banlist(std::string_view json_bytes) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_bytes);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedDocument, e.what(), "byte " + std::to_string(e.byte));
  }
  if (!j.is_array()) throw Error(ErrorCode::kMalformedDocument, "expected an array", "/");
  std::vector<BanRule> rules;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& r = j[i];
    const std::string where = "/" + std::to_string(i);
    if (!r.is_object() || r.size() != 2 || !r.contains("name") || !r.contains("pattern") ||
        !r["name"].is_string() || !r["pattern"].is_string()) {
      throw Error(ErrorCode::kMalformedDocument, "expected {name, pattern} strings", where);
    }
    BanRule rule{r["name"].get<std::string>(), r["pattern"].get<std::string>()};
    if (auto err = compile_error(rule.pattern)) {
      throw Error(ErrorCode::kCompileFail, err->message, where + "/pattern");
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::vector<Finding> validate_stored(std::string_view stored, const std::vector<BanRule>& banlist) {
  std::vector<Finding> out;
  const UnescapeResult unescaped = unescape_lenient(stored);
  for (std::size_t offset : unescaped.odd_backslashes) {
    out.push_back(at(FindingCode::kOddBackslash, offset, "backslash is not doubled"));
  }
  check_live(unescaped.live, banlist, unescaped.stored_offset, stored.size(), out);
  sort_findings(out);
  return out;
}

std::vector<Finding> validate_document(const RegexDocument& doc,
                                       const std::vector<BanRule>& banlist) {
  std::vector<Finding> out;
  const std::string live = render_compact_unchecked(doc);
  OffsetMap identity(live.size());
  for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
  check_live(live, banlist, identity, live.size(), out);

  const bool compiles = std::none_of(out.begin(), out.end(), [](const Finding& f) {
    return f.code == FindingCode::kCompileFail;
  });
  if (compiles && !has_inline_flags(live)) {
    const auto matcher = CompiledTopicMatcher::compile(live);
    auto run = [&](const std::vector<std::string>& texts, bool expected, const char* list) {
      for (std::size_t i = 0; i < texts.size(); ++i) {
        if (matcher.matches(texts[i]) == expected) continue;
        Finding f;
        f.code = FindingCode::kTestFail;
        f.test = fmt::format("{}[{}]", list, i);
        f.message = fmt::format("\"{}\" {}", texts[i], expected ? "is not matched" : "is matched");
        out.push_back(std::move(f));
      }
    };
    run(doc.tests.must_match, true, "must_match");
    run(doc.tests.must_not_match, false, "must_not_match");
  }
  sort_findings(out);
  return out;
}

bool has_errors(const std::vector<Finding>& findings) {
  return std::any_of(findings.begin(), findings.end(),
                     [](const Finding& f) { return f.severity == Severity::kError; });
}

std::string to_json_line(const Finding& f) {
  nlohmann::ordered_json j;
  j["severity"] = to_string(f.severity);
  j["code"] = to_string(f.code);
  if (f.offset) {
    j["location"] = *f.offset;
  } else {
    j["location"] = f.test;
  }
  j["message"] = f.message;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace topickit
