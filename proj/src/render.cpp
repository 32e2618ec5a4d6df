#include "topickit/render.hpp"

#include <algorithm>
#include <variant>

#include "topickit/engine.hpp"
#include "topickit/error.hpp"
#include "topickit/unicode.hpp"

namespace topickit {
namespace {

std::string join(std::span<const std::string> parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

void ensure_compiles(const std::string& regex) {
  if (auto err = compile_error(regex)) {
    throw Error(ErrorCode::kRenderInvalid, err->message, "offset " + std::to_string(err->offset));
  }
}

bool is_inert_label(std::string_view label) {
  return !label.empty() && std::all_of(label.begin(), label.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

}  // namespace

std::string build_keyword(const KeywordClause& clause) {
  std::string out = clause.prefix_guard;
  out += clause.core;
  if (!clause.exclusions.empty()) {
    out += "(?!(";
    out += join(clause.exclusions, "|");
    out += "))";
  }
  out += clause.suffix_guard;
  return out;
}

std::string build_bipartite(std::span<const std::string> set_a,
                            std::span<const std::string> set_b, int max_gap,
                            bool ordered_both_ways) {
  if (set_a.empty() || set_b.empty()) {
    throw Error(ErrorCode::kEmptySet, "bipartite clause needs two nonempty word sets");
  }
  if (max_gap < 0 || max_gap > kMaxGapLimit) {
    throw Error(ErrorCode::kInvalidArgument, "max_gap must be in [0, 1000]");
  }
  const std::string a = "(" + join(set_a, "|") + ")";
  const std::string b = "(" + join(set_b, "|") + ")";
  const std::string gap = ".{0," + std::to_string(max_gap) + "}?";
  std::string out = a + gap + b;
  if (ordered_both_ways) out += "|" + b + gap + a;
  return out;
}

std::string render_clause(const Clause& clause) {
  return std::visit(
      [](const auto& c) -> std::string {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, LiteralClause>) {
          return c.pattern;
        } else if constexpr (std::is_same_v<T, KeywordClause>) {
          return build_keyword(c);
        } else {
          return build_bipartite(c.set_a, c.set_b, c.max_gap, c.ordered_both_ways);
        }
      },
      clause);
}

std::string render_compact_unchecked(const RegexDocument& doc) {
  std::string out;
  for (const auto& section : doc.sections) {
    for (const auto& clause : section.clauses) {
      if (!out.empty()) out += '|';
      out += '(';
      out += render_clause(clause);
      out += ')';
    }
  }
  return out;
}

std::string render_compact(const RegexDocument& doc) {
  std::string out = render_compact_unchecked(doc);
  ensure_compiles(out);
  return out;
}

std::string render_annotated(const RegexDocument& doc, const RenderOptions& opts) {
  if (opts.max_line_width < 20) {
    throw Error(ErrorCode::kInvalidArgument, "max_line_width must be at least 20");
  }
  for (const auto& section : doc.sections) {
    if (!is_inert_label(section.label)) {
      throw Error(ErrorCode::kLabelCharset, "label \"" + section.label + "\" is outside [a-z0-9_]");
    }
  }
  const std::string inert(kInertToken);
  const std::size_t width = static_cast<std::size_t>(opts.max_line_width);
  // Every line except the last ends with "|(?!x)x"; reserve room for it.
  const std::size_t tail = 1 + unicode::codepoint_count(inert);

  std::string out;
  std::string line = inert + "_version_" + std::to_string(doc.version);
  auto line_width = [&] { return unicode::codepoint_count(line); };
  auto break_line = [&] {
    out += line;
    out += '|';
    out += inert;
    out += '\n';
    line.clear();
  };
  auto append = [&](const std::string& alternative) {
    if (!line.empty() &&
        line_width() + 1 + unicode::codepoint_count(alternative) + tail > width) {
      break_line();
    }
    line += '|';
    line += alternative;
  };

  for (const auto& section : doc.sections) {
    break_line();
    line += '|';
    line += inert + "_" + section.label;
    for (const auto& clause : section.clauses) append("(" + render_clause(clause) + ")");
  }
  out += line;
  ensure_compiles(out);
  return out;
}

std::string render(const RegexDocument& doc, const RenderOptions& opts) {
  return opts.annotated ? render_annotated(doc, opts) : render_compact(doc);
}

std::string escape_for_store(std::string_view live) {
  std::string out;
  out.reserve(live.size() + 8);
  for (char c : live) {
    out += c;
    if (c == '\\') out += c;
  }
  return out;
}

UnescapeResult unescape_lenient(std::string_view stored) {
  UnescapeResult r;
  r.live.reserve(stored.size());
  r.stored_offset.reserve(stored.size());
  std::size_t i = 0;
  while (i < stored.size()) {
    if (stored[i] == '\\') {
      if (i + 1 < stored.size() && stored[i + 1] == '\\') {
        r.live += '\\';
        r.stored_offset.push_back(i);
        i += 2;
        continue;
      }
      r.odd_backslashes.push_back(i);
    }
    r.live += stored[i];
    r.stored_offset.push_back(i);
    ++i;
  }
  return r;
}

std::string unescape_from_store(std::string_view stored) {
  UnescapeResult r = unescape_lenient(stored);
  if (!r.odd_backslashes.empty()) {
    throw Error(ErrorCode::kOddBackslash, "lone backslash in stored regex",
                "offset " + std::to_string(r.odd_backslashes.front()));
  }
  return std::move(r.live);
}

}  // namespace topickit
