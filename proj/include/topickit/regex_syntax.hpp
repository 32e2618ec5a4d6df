#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

// Structural view of a regex string: alternations, groups, classes, escapes,
// quantifiers, each carrying its byte span in the source. This is not a
// matcher; it exists so that variant counting, chunk decomposition, RTL
// wrapping and the lint checks can reason about syntax positions without
// tripping over escapes and character classes.
namespace topickit::syntax {

enum class NodeKind {
  kAlternation,  // children: one kSequence per alternative
  kSequence,     // children: atoms and quantified atoms, in order
  kGroup,        // children: [kAlternation] when the group has content
  kClass,
  kLiteral,
  kEscape,       // shorthand classes, assertions, backreferences
  kDot,
  kAnchor,
  kQuantified,   // children: [atom]
};

enum class GroupKind {
  kCapture,
  kNonCapture,
  kNegativeLookahead,
  kPositiveLookahead,
  kNegativeLookbehind,
  kPositiveLookbehind,
  kOther,  // named, atomic, inline flags, recursion, comments
};

struct ClassRange {
  char32_t lo;
  char32_t hi;
};

struct Node {
  NodeKind kind = NodeKind::kSequence;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<Node> children;

  GroupKind group = GroupKind::kCapture;
  std::size_t content_begin = 0;
  std::size_t content_end = 0;

  char32_t literal = 0;
  // Set on kLiteral when the source was a backslash escape ("\.", "\x{41}").
  bool escaped = false;

  bool negated = false;
  std::vector<ClassRange> ranges;
  // Class contains \d, \w, [:alpha:] and similar; its member set is open.
  bool class_has_shorthand = false;

  char32_t escape = 0;

  std::size_t min = 0;
  std::optional<std::size_t> max;
  bool lazy = false;
  bool possessive = false;

  std::size_t length() const { return end - begin; }
};

// Parses `pattern`. Throws Error(kCompileFail) with a byte offset on
// unbalanced parentheses, unterminated classes or dangling escapes.
Node parse(std::string_view pattern);

// Calls `fn(node, depth_in_lookaround)` for every node in pre-order.
template <typename Fn>
void visit(const Node& node, Fn&& fn, int lookaround_depth = 0) {
  fn(node, lookaround_depth);
  const bool is_lookaround =
      node.kind == NodeKind::kGroup &&
      (node.group == GroupKind::kNegativeLookahead ||
       node.group == GroupKind::kPositiveLookahead ||
       node.group == GroupKind::kNegativeLookbehind ||
       node.group == GroupKind::kPositiveLookbehind);
  for (const auto& child : node.children) {
    visit(child, fn, lookaround_depth + (is_lookaround ? 1 : 0));
  }
}

// Byte offsets that begin a syntax token: not inside a character class and
// not the escaped character of a backslash escape. Indexed by byte offset.
std::vector<bool> syntax_positions(std::string_view pattern);

// Top-level alternatives that are inert annotations ("(?!x)x...").
bool is_inert_alternative(std::string_view alternative);

}  // namespace topickit::syntax
