#include "topickit/document.hpp"

#include <algorithm>
#include <limits>
#include <regex>
#include <set>
#include <unordered_set>

#include "json.hpp"

#include "topickit/error.hpp"
#include "topickit/regex_syntax.hpp"
#include "topickit/unicode.hpp"

namespace topickit {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(Tier tier) {
  return tier == Tier::kTier1 ? "tier1" : "tier2";
}

Tier parse_tier(std::string_view text) {
  if (text == "tier1") return Tier::kTier1;
  if (text == "tier2") return Tier::kTier2;
  throw Error(ErrorCode::kInvalidArgument,
              "tier must be \"tier1\" or \"tier2\", got \"" + std::string(text) + "\"");
}

// ---------------------------------------------------------------------------
// RTL wrapping

namespace {

struct RtlRun {
  std::size_t begin;
  std::size_t end;
};

bool is_rtl_literal(const syntax::Node& n) {
  return n.kind == syntax::NodeKind::kLiteral && !n.escaped && unicode::is_rtl(n.literal);
}

bool is_combining(const syntax::Node& n) {
  return n.kind == syntax::NodeKind::kLiteral && !n.escaped && unicode::is_mark(n.literal);
}

// `sole_group_content` is true when `seq` is the only alternative of a
// plain group, i.e. it is already parenthesized on its own.
void collect_runs(const syntax::Node& node, bool sole_group_content,
                  std::vector<RtlRun>& out) {
  using syntax::NodeKind;
  if (node.kind == NodeKind::kSequence) {
    const auto& items = node.children;
    std::size_t i = 0;
    while (i < items.size()) {
      if (!is_rtl_literal(items[i])) {
        collect_runs(items[i], false, out);
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < items.size() && (is_rtl_literal(items[j]) || (j > i && is_combining(items[j])))) ++j;
      const bool whole = (i == 0 && j == items.size());
      if (!(whole && sole_group_content)) out.push_back({items[i].begin, items[j - 1].end});
      i = j;
    }
    return;
  }
  if (node.kind == NodeKind::kGroup) {
    const bool plain = node.group == syntax::GroupKind::kCapture ||
                       node.group == syntax::GroupKind::kNonCapture;
    for (const auto& child : node.children) {
      // child is the group's alternation
      const bool single = child.children.size() == 1;
      for (const auto& seq : child.children) collect_runs(seq, plain && single, out);
    }
    return;
  }
  for (const auto& child : node.children) collect_runs(child, false, out);
}

std::vector<RtlRun> rtl_runs(std::string_view pattern) {
  std::vector<RtlRun> runs;
  syntax::Node root;
  try {
    root = syntax::parse(pattern);
  } catch (const Error&) {
    return runs;
  }
  collect_runs(root, false, runs);
  std::sort(runs.begin(), runs.end(),
            [](const RtlRun& a, const RtlRun& b) { return a.begin < b.begin; });
  return runs;
}

}  // namespace

std::string wrap_rtl_words(std::string_view fragment) {
  const auto runs = rtl_runs(fragment);
  if (runs.empty()) return std::string(fragment);
  std::string out;
  std::size_t cursor = 0;
  for (const auto& run : runs) {
    out.append(fragment.substr(cursor, run.begin - cursor));
    out.push_back('(');
    out.append(fragment.substr(run.begin, run.end - run.begin));
    out.push_back(')');
    cursor = run.end;
  }
  out.append(fragment.substr(cursor));
  return out;
}

std::vector<std::size_t> unwrapped_rtl_offsets(std::string_view pattern) {
  std::vector<std::size_t> out;
  for (const auto& run : rtl_runs(pattern)) out.push_back(run.begin);
  return out;
}

// ---------------------------------------------------------------------------
// Invariants

namespace {

[[noreturn]] void violation(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kInvariantViolation, what, where);
}

bool is_label(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

bool is_topic(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-' || c == '.';
  });
}

bool is_language_tag(const std::string& s) {
  static const std::regex kTag("[A-Za-z]{2,8}(-[A-Za-z0-9]{1,8})*");
  return std::regex_match(s, kTag);
}

void check_fragment(const std::string& where, const std::string& fragment) {
  if (fragment.empty()) violation(where, "empty regex fragment");
  if (fragment.find('\n') != std::string::npos) violation(where, "fragment contains a line break");
  try {
    (void)syntax::parse(fragment);
  } catch (const Error& e) {
    violation(where, std::string("fragment is not self-contained: ") + e.what());
  }
}

void check_guard(const std::string& where, const std::string& guard) {
  if (guard.empty()) return;
  check_fragment(where, guard);
}

}  // namespace

void check_invariants(const RegexDocument& doc) {
  if (!is_topic(doc.topic)) violation("/topic", "topic must match [A-Za-z0-9_.-]+");
  if (!is_language_tag(doc.language)) violation("/language", "language must be a BCP-47-style tag");
  if (doc.version < 1) violation("/version", "version must be positive");
  if (doc.sections.empty()) violation("/sections", "at least one section required");
  std::set<std::string> labels;
  for (std::size_t s = 0; s < doc.sections.size(); ++s) {
    const auto& section = doc.sections[s];
    const std::string at = "/sections/" + std::to_string(s);
    if (!is_label(section.label)) violation(at + "/label", "label must match [a-z0-9_]+");
    if (!labels.insert(section.label).second) {
      violation(at + "/label", "duplicate section label \"" + section.label + "\"");
    }
    if (section.clauses.empty()) violation(at + "/clauses", "section has no clauses");
    for (std::size_t c = 0; c < section.clauses.size(); ++c) {
      const std::string cat = at + "/clauses/" + std::to_string(c);
      std::visit(
          [&](const auto& clause) {
            using T = std::decay_t<decltype(clause)>;
            if constexpr (std::is_same_v<T, LiteralClause>) {
              check_fragment(cat + "/pattern", clause.pattern);
            } else if constexpr (std::is_same_v<T, KeywordClause>) {
              check_fragment(cat + "/core", clause.core);
              check_guard(cat + "/prefix_guard", clause.prefix_guard);
              check_guard(cat + "/suffix_guard", clause.suffix_guard);
              for (std::size_t e = 0; e < clause.exclusions.size(); ++e) {
                check_fragment(cat + "/exclusions/" + std::to_string(e), clause.exclusions[e]);
              }
            } else {
              if (clause.set_a.empty()) violation(cat + "/set_a", "set_a is empty");
              if (clause.set_b.empty()) violation(cat + "/set_b", "set_b is empty");
              for (std::size_t w = 0; w < clause.set_a.size(); ++w) {
                check_fragment(cat + "/set_a/" + std::to_string(w), clause.set_a[w]);
              }
              for (std::size_t w = 0; w < clause.set_b.size(); ++w) {
                check_fragment(cat + "/set_b/" + std::to_string(w), clause.set_b[w]);
              }
              if (clause.max_gap < 0 || clause.max_gap > kMaxGapLimit) {
                violation(cat + "/max_gap", "max_gap must be in [0, 1000]");
              }
            }
          },
          section.clauses[c]);
    }
  }
  std::unordered_set<std::string> positives(doc.tests.must_match.begin(),
                                            doc.tests.must_match.end());
  for (std::size_t i = 0; i < doc.tests.must_not_match.size(); ++i) {
    if (positives.contains(doc.tests.must_not_match[i])) {
      violation("/tests/must_not_match/" + std::to_string(i),
                "text appears in both must_match and must_not_match");
    }
  }
}

namespace {

void wrap_all(std::string& fragment) { fragment = wrap_rtl_words(fragment); }

RegexDocument normalized(RegexDocument doc) {
  for (auto& section : doc.sections) {
    for (auto& clause : section.clauses) {
      std::visit(
          [](auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, LiteralClause>) {
              wrap_all(c.pattern);
            } else if constexpr (std::is_same_v<T, KeywordClause>) {
              wrap_all(c.core);
              for (auto& e : c.exclusions) wrap_all(e);
            } else {
              for (auto& w : c.set_a) wrap_all(w);
              for (auto& w : c.set_b) wrap_all(w);
            }
          },
          clause);
    }
  }
  return doc;
}

}  // namespace

RegexDocument make_document(RegexDocument draft) {
  check_invariants(draft);
  RegexDocument doc = normalized(std::move(draft));
  check_invariants(doc);
  return doc;
}

// ---------------------------------------------------------------------------
// JSON form

namespace {

[[noreturn]] void malformed(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kMalformedDocument, what, where);
}

void expect_keys(const json& obj, const std::string& where,
                 std::initializer_list<std::string_view> allowed) {
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      malformed(where + "/" + item.key(), "unknown key");
    }
  }
}

const json& field(const json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) malformed(where + "/" + key, "missing required key");
  return *it;
}

std::string get_string(const json& v, const std::string& where) {
  if (!v.is_string()) malformed(where, "expected a string");
  return v.get<std::string>();
}

int get_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) malformed(where, "expected an integer");
  const auto value = v.get<long long>();
  if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max()) {
    malformed(where, "integer out of range");
  }
  return static_cast<int>(value);
}

std::vector<std::string> get_strings(const json& v, const std::string& where) {
  if (!v.is_array()) malformed(where, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_string(v[i], where + "/" + std::to_string(i)));
  return out;
}

Clause parse_clause(const json& v, const std::string& where) {
  if (!v.is_object()) malformed(where, "expected an object");
  const std::string kind = get_string(field(v, where, "kind"), where + "/kind");
  if (kind == "literal") {
    expect_keys(v, where, {"kind", "pattern"});
    return LiteralClause{get_string(field(v, where, "pattern"), where + "/pattern")};
  }
  if (kind == "keyword") {
    expect_keys(v, where, {"kind", "core", "prefix_guard", "suffix_guard", "exclusions"});
    KeywordClause k;
    k.core = get_string(field(v, where, "core"), where + "/core");
    if (v.contains("prefix_guard")) k.prefix_guard = get_string(v["prefix_guard"], where + "/prefix_guard");
    if (v.contains("suffix_guard")) k.suffix_guard = get_string(v["suffix_guard"], where + "/suffix_guard");
    if (v.contains("exclusions")) k.exclusions = get_strings(v["exclusions"], where + "/exclusions");
    return k;
  }
  if (kind == "bipartite") {
    expect_keys(v, where, {"kind", "set_a", "set_b", "max_gap", "ordered_both_ways"});
    BipartiteClause b;
    b.set_a = get_strings(field(v, where, "set_a"), where + "/set_a");
    b.set_b = get_strings(field(v, where, "set_b"), where + "/set_b");
    if (v.contains("max_gap")) b.max_gap = get_int(v["max_gap"], where + "/max_gap");
    if (v.contains("ordered_both_ways")) {
      if (!v["ordered_both_ways"].is_boolean()) malformed(where + "/ordered_both_ways", "expected a boolean");
      b.ordered_both_ways = v["ordered_both_ways"].get<bool>();
    }
    return b;
  }
  malformed(where + "/kind", "kind must be literal, keyword or bipartite");
}

ordered_json clause_json(const Clause& clause) {
  return std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        ordered_json j;
        if constexpr (std::is_same_v<T, LiteralClause>) {
          j["kind"] = "literal";
          j["pattern"] = c.pattern;
        } else if constexpr (std::is_same_v<T, KeywordClause>) {
          j["kind"] = "keyword";
          j["core"] = c.core;
          j["prefix_guard"] = c.prefix_guard;
          j["suffix_guard"] = c.suffix_guard;
          j["exclusions"] = c.exclusions;
        } else {
          j["kind"] = "bipartite";
          j["set_a"] = c.set_a;
          j["set_b"] = c.set_b;
          j["max_gap"] = c.max_gap;
          j["ordered_both_ways"] = c.ordered_both_ways;
        }
        return j;
      },
      clause);
}

}  // namespace

RegexDocument parse_document(std::string_view bytes) {
  json root;
  try {
    root = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports "line L, column C" inside what().
    throw Error(ErrorCode::kMalformedDocument, e.what(), "byte " + std::to_string(e.byte));
  }
  if (!root.is_object()) malformed("", "document must be a JSON object");
  expect_keys(root, "", {"topic", "language", "tier", "version", "sections", "tests"});

  RegexDocument doc;
  doc.topic = get_string(field(root, "", "topic"), "/topic");
  doc.language = get_string(field(root, "", "language"), "/language");
  try {
    doc.tier = parse_tier(get_string(field(root, "", "tier"), "/tier"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kMalformedDocument) throw;
    malformed("/tier", "tier must be \"tier1\" or \"tier2\"");
  }
  doc.version = get_int(field(root, "", "version"), "/version");

  const json& sections = field(root, "", "sections");
  if (!sections.is_array()) malformed("/sections", "expected an array");
  for (std::size_t s = 0; s < sections.size(); ++s) {
    const std::string at = "/sections/" + std::to_string(s);
    const json& sv = sections[s];
    if (!sv.is_object()) malformed(at, "expected an object");
    expect_keys(sv, at, {"label", "clauses"});
    Section section;
    section.label = get_string(field(sv, at, "label"), at + "/label");
    const json& clauses = field(sv, at, "clauses");
    if (!clauses.is_array()) malformed(at + "/clauses", "expected an array");
    for (std::size_t c = 0; c < clauses.size(); ++c) {
      section.clauses.push_back(parse_clause(clauses[c], at + "/clauses/" + std::to_string(c)));
    }
    doc.sections.push_back(std::move(section));
  }

  if (root.contains("tests")) {
    const json& tests = root["tests"];
    if (!tests.is_object()) malformed("/tests", "expected an object");
    expect_keys(tests, "/tests", {"must_match", "must_not_match"});
    if (tests.contains("must_match")) {
      doc.tests.must_match = get_strings(tests["must_match"], "/tests/must_match");
    }
    if (tests.contains("must_not_match")) {
      doc.tests.must_not_match = get_strings(tests["must_not_match"], "/tests/must_not_match");
    }
  }
  return make_document(std::move(doc));
}

std::string serialize_document(const RegexDocument& input) {
  const RegexDocument doc = normalized(input);
  ordered_json root;
  root["topic"] = doc.topic;
  root["language"] = doc.language;
  root["tier"] = to_string(doc.tier);
  root["version"] = doc.version;
  ordered_json sections = ordered_json::array();
  for (const auto& section : doc.sections) {
    ordered_json s;
    s["label"] = section.label;
    ordered_json clauses = ordered_json::array();
    for (const auto& clause : section.clauses) clauses.push_back(clause_json(clause));
    s["clauses"] = std::move(clauses);
    sections.push_back(std::move(s));
  }
  root["sections"] = std::move(sections);
  ordered_json tests;
  tests["must_match"] = doc.tests.must_match;
  tests["must_not_match"] = doc.tests.must_not_match;
  root["tests"] = std::move(tests);
  return root.dump(2) + "\n";
}

}  // namespace topickit
