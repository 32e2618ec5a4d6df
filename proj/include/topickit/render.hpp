#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topickit/document.hpp"

namespace topickit {

// An alternative that can never match: the lookahead forbids the 'x' the
// alternative then requires. Text appended to it is inert.
inline constexpr std::string_view kInertToken = "(?!x)x";

struct RenderOptions {
  bool annotated = false;
  int max_line_width = 100;
};

std::string build_keyword(const KeywordClause& clause);

// "(A1|..|AN).{0,g}?(B1|..|BM)" plus the mirrored order when
// `ordered_both_ways`. Throws Error(kEmptySet) for an empty set and
// Error(kInvalidArgument) when max_gap is outside [0, 1000].
std::string build_bipartite(std::span<const std::string> set_a,
                            std::span<const std::string> set_b, int max_gap,
                            bool ordered_both_ways);

std::string render_clause(const Clause& clause);

// Single-line alternation "(c1)|(c2)|..." over all clauses in document order.
// Throws Error(kRenderInvalid) if the engine rejects the result.
std::string render_compact(const RegexDocument& doc);
// Same string without the engine compile check.
std::string render_compact_unchecked(const RegexDocument& doc);

// Multi-line rendering with inert version/section labels. Matches exactly
// like render_compact. Throws Error(kLabelCharset) for labels outside
// [a-z0-9_], Error(kInvalidArgument) for max_line_width < 20 and
// Error(kRenderInvalid) if the engine rejects the result.
std::string render_annotated(const RegexDocument& doc, const RenderOptions& opts = {});

std::string render(const RegexDocument& doc, const RenderOptions& opts);

// Live form -> stored form: every backslash doubled.
std::string escape_for_store(std::string_view live);

// Stored form -> live form. Throws Error(kOddBackslash) at the byte offset
// of the first backslash that is not part of a pair.
std::string unescape_from_store(std::string_view stored);

// Unescape that never fails: pairs are halved, lone backslashes are kept
// and reported. `stored_offset[i]` is the stored byte offset that produced
// live byte i.
struct UnescapeResult {
  std::string live;
  std::vector<std::size_t> stored_offset;
  std::vector<std::size_t> odd_backslashes;
};
UnescapeResult unescape_lenient(std::string_view stored);

}  // namespace topickit
