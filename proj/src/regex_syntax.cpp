#include "topickit/regex_syntax.hpp"

#include <cctype>
#include <string>

#include <unicode/utf8.h>

#include "topickit/error.hpp"

namespace topickit::syntax {
namespace {

bool is_ascii_digit(char32_t c) { return c >= U'0' && c <= U'9'; }
bool is_ascii_alpha(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Node parse_all() {
    Node root = parse_alternation();
    if (pos_ < src_.size()) {
      // Only a stray ')' can stop the top-level alternation early.
      fail("unbalanced ')'", pos_);
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    throw Error(ErrorCode::kCompileFail, what, "offset " + std::to_string(at));
  }

  bool at_end() const { return pos_ >= src_.size(); }

  char32_t peek_cp(std::size_t at, std::size_t* width = nullptr) const {
    const auto* s = reinterpret_cast<const uint8_t*>(src_.data());
    const auto length = static_cast<int32_t>(src_.size());
    auto i = static_cast<int32_t>(at);
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (width) *width = static_cast<std::size_t>(i) - at;
    return c < 0 ? U'\uFFFD' : static_cast<char32_t>(c);
  }

  char32_t next_cp() {
    std::size_t w = 0;
    char32_t c = peek_cp(pos_, &w);
    pos_ += w;
    return c;
  }

  Node parse_alternation() {
    Node alt;
    alt.kind = NodeKind::kAlternation;
    alt.begin = pos_;
    alt.children.push_back(parse_sequence());
    while (!at_end() && src_[pos_] == '|') {
      ++pos_;
      alt.children.push_back(parse_sequence());
    }
    alt.end = pos_;
    return alt;
  }

  Node parse_sequence() {
    Node seq;
    seq.kind = NodeKind::kSequence;
    seq.begin = pos_;
    while (!at_end() && src_[pos_] != '|' && src_[pos_] != ')') {
      Node atom = parse_atom();
      seq.children.push_back(parse_quantifier(std::move(atom)));
    }
    seq.end = pos_;
    return seq;
  }

  // Reads "{m}", "{m,}" or "{m,n}" at pos_. Leaves pos_ untouched and
  // returns false when the brace is a literal.
  bool read_braces(std::size_t* min, std::optional<std::size_t>* max) {
    std::size_t i = pos_ + 1;
    auto read_int = [&](std::size_t* out) {
      std::size_t start = i;
      std::size_t v = 0;
      while (i < src_.size() && is_ascii_digit(static_cast<unsigned char>(src_[i]))) {
        v = v * 10 + static_cast<std::size_t>(src_[i] - '0');
        ++i;
      }
      *out = v;
      return i > start;
    };
    std::size_t lo = 0;
    if (!read_int(&lo)) return false;
    std::optional<std::size_t> hi = lo;
    if (i < src_.size() && src_[i] == ',') {
      ++i;
      std::size_t h = 0;
      if (read_int(&h)) {
        hi = h;
      } else {
        hi.reset();
      }
    }
    if (i >= src_.size() || src_[i] != '}') return false;
    *min = lo;
    *max = hi;
    pos_ = i + 1;
    return true;
  }

  Node parse_quantifier(Node atom) {
    if (at_end()) return atom;
    const char c = src_[pos_];
    std::size_t min = 0;
    std::optional<std::size_t> max;
    const std::size_t start = pos_;
    if (c == '*') {
      ++pos_;
    } else if (c == '+') {
      min = 1;
      ++pos_;
    } else if (c == '?') {
      max = 1;
      ++pos_;
    } else if (c == '{') {
      if (!read_braces(&min, &max)) return atom;
    } else {
      return atom;
    }
    if (atom.kind == NodeKind::kAnchor ||
        (atom.kind == NodeKind::kGroup && atom.children.empty() &&
         atom.group == GroupKind::kOther)) {
      fail("quantifier does not follow a repeatable item", start);
    }
    Node q;
    q.kind = NodeKind::kQuantified;
    q.begin = atom.begin;
    q.min = min;
    q.max = max;
    if (max && *max < min) fail("quantifier range out of order", start);
    if (!at_end() && src_[pos_] == '?') {
      q.lazy = true;
      ++pos_;
    } else if (!at_end() && src_[pos_] == '+') {
      q.possessive = true;
      ++pos_;
    }
    q.end = pos_;
    q.children.push_back(std::move(atom));
    return q;
  }

  Node parse_atom() {
    const std::size_t start = pos_;
    const char c = src_[pos_];
    if (c == '(') return parse_group();
    if (c == '[') return parse_class();
    if (c == '\\') return parse_escape();
    Node n;
    n.begin = start;
    if (c == '.') {
      n.kind = NodeKind::kDot;
      ++pos_;
    } else if (c == '^' || c == '$') {
      n.kind = NodeKind::kAnchor;
      n.literal = static_cast<char32_t>(c);
      ++pos_;
    } else if (c == '*' || c == '+' || c == '?') {
      fail("quantifier without operand", start);
    } else {
      n.kind = NodeKind::kLiteral;
      n.literal = next_cp();
    }
    n.end = pos_;
    return n;
  }

  Node parse_group() {
    Node g;
    g.kind = NodeKind::kGroup;
    g.begin = pos_;
    ++pos_;  // '('
    bool has_content = true;
    if (!at_end() && src_[pos_] == '?') {
      const std::string_view rest = src_.substr(pos_);
      if (rest.starts_with("?:")) {
        g.group = GroupKind::kNonCapture;
        pos_ += 2;
      } else if (rest.starts_with("?!")) {
        g.group = GroupKind::kNegativeLookahead;
        pos_ += 2;
      } else if (rest.starts_with("?=")) {
        g.group = GroupKind::kPositiveLookahead;
        pos_ += 2;
      } else if (rest.starts_with("?<=")) {
        g.group = GroupKind::kPositiveLookbehind;
        pos_ += 3;
      } else if (rest.starts_with("?<!")) {
        g.group = GroupKind::kNegativeLookbehind;
        pos_ += 3;
      } else if (rest.starts_with("?#")) {
        g.group = GroupKind::kOther;
        const auto close = src_.find(')', pos_);
        if (close == std::string_view::npos) fail("unterminated comment", g.begin);
        pos_ = close;
        has_content = false;
      } else if (rest.starts_with("?<") || rest.starts_with("?P<") ||
                 rest.starts_with("?'")) {
        g.group = GroupKind::kOther;
        const char closer = rest[1] == '\'' ? '\'' : '>';
        const auto close = src_.find(closer, pos_ + 2);
        if (close == std::string_view::npos) fail("unterminated group name", g.begin);
        pos_ = close + 1;
      } else if (rest.starts_with("?>")) {
        g.group = GroupKind::kOther;
        pos_ += 2;
      } else {
        // Inline flags "(?i)", "(?i:...)", recursion "(?R)", "(?1)", "(?&x)".
        g.group = GroupKind::kOther;
        ++pos_;
        while (!at_end() && src_[pos_] != ')' && src_[pos_] != ':') ++pos_;
        if (at_end()) fail("unterminated group", g.begin);
        if (src_[pos_] == ':') {
          ++pos_;
        } else {
          has_content = false;
        }
      }
    }
    g.content_begin = pos_;
    if (has_content) g.children.push_back(parse_alternation());
    g.content_end = pos_;
    if (at_end() || src_[pos_] != ')') fail("missing ')'", g.begin);
    ++pos_;
    g.end = pos_;
    return g;
  }

  // Decodes the escape at pos_ (which points at '\').
  Node parse_escape() {
    Node n;
    n.begin = pos_;
    ++pos_;
    if (at_end()) fail("dangling backslash", n.begin);
    const char32_t c = next_cp();
    n.escaped = true;
    switch (c) {
      case U'n': n.kind = NodeKind::kLiteral; n.literal = U'\n'; break;
      case U't': n.kind = NodeKind::kLiteral; n.literal = U'\t'; break;
      case U'r': n.kind = NodeKind::kLiteral; n.literal = U'\r'; break;
      case U'f': n.kind = NodeKind::kLiteral; n.literal = U'\f'; break;
      case U'e': n.kind = NodeKind::kLiteral; n.literal = 0x1B; break;
      case U'a': n.kind = NodeKind::kLiteral; n.literal = 0x07; break;
      case U'x': {
        n.kind = NodeKind::kLiteral;
        char32_t v = 0;
        if (!at_end() && src_[pos_] == '{') {
          const auto close = src_.find('}', pos_);
          if (close == std::string_view::npos) fail("unterminated \\x{", n.begin);
          for (std::size_t i = pos_ + 1; i < close; ++i) v = v * 16 + hex(src_[i], n.begin);
          pos_ = close + 1;
        } else {
          for (int k = 0; k < 2 && !at_end() && std::isxdigit(static_cast<unsigned char>(src_[pos_])); ++k) {
            v = v * 16 + hex(src_[pos_++], n.begin);
          }
        }
        n.literal = v;
        break;
      }
      case U'p':
      case U'P': {
        n.kind = NodeKind::kEscape;
        n.escape = c;
        if (!at_end() && src_[pos_] == '{') {
          const auto close = src_.find('}', pos_);
          if (close == std::string_view::npos) fail("unterminated \\p{", n.begin);
          pos_ = close + 1;
        } else if (!at_end()) {
          next_cp();
        }
        break;
      }
      default:
        if (is_ascii_alpha(c) || is_ascii_digit(c)) {
          n.kind = NodeKind::kEscape;
          n.escape = c;
        } else {
          n.kind = NodeKind::kLiteral;
          n.literal = c;
        }
    }
    n.end = pos_;
    return n;
  }

  char32_t hex(char ch, std::size_t at) const {
    if (ch >= '0' && ch <= '9') return static_cast<char32_t>(ch - '0');
    if (ch >= 'a' && ch <= 'f') return static_cast<char32_t>(ch - 'a' + 10);
    if (ch >= 'A' && ch <= 'F') return static_cast<char32_t>(ch - 'A' + 10);
    fail("bad hex digit", at);
  }

  // One member of a class: a literal code point, or nullopt for a shorthand.
  std::optional<char32_t> class_member(Node& cls) {
    const char ch = src_[pos_];
    if (ch == '[' && src_.substr(pos_).starts_with("[:")) {
      const auto close = src_.find(":]", pos_ + 2);
      if (close != std::string_view::npos) {
        pos_ = close + 2;
        cls.class_has_shorthand = true;
        return std::nullopt;
      }
    }
    if (ch != '\\') return next_cp();
    const std::size_t at = pos_;
    ++pos_;
    if (at_end()) fail("dangling backslash", at);
    const char32_t c = next_cp();
    switch (c) {
      case U'n': return U'\n';
      case U't': return U'\t';
      case U'r': return U'\r';
      case U'f': return U'\f';
      case U'd': case U'D': case U'w': case U'W': case U's': case U'S':
      case U'h': case U'H': case U'v': case U'V':
        cls.class_has_shorthand = true;
        return std::nullopt;
      case U'p':
      case U'P':
        if (!at_end() && src_[pos_] == '{') {
          const auto close = src_.find('}', pos_);
          if (close == std::string_view::npos) fail("unterminated \\p{", at);
          pos_ = close + 1;
        } else if (!at_end()) {
          next_cp();
        }
        cls.class_has_shorthand = true;
        return std::nullopt;
      case U'x': {
        char32_t v = 0;
        if (!at_end() && src_[pos_] == '{') {
          const auto close = src_.find('}', pos_);
          if (close == std::string_view::npos) fail("unterminated \\x{", at);
          for (std::size_t i = pos_ + 1; i < close; ++i) v = v * 16 + hex(src_[i], at);
          pos_ = close + 1;
        } else {
          for (int k = 0; k < 2 && !at_end() && std::isxdigit(static_cast<unsigned char>(src_[pos_])); ++k) {
            v = v * 16 + hex(src_[pos_++], at);
          }
        }
        return v;
      }
      default:
        return c;
    }
  }

  Node parse_class() {
    Node cls;
    cls.kind = NodeKind::kClass;
    cls.begin = pos_;
    ++pos_;  // '['
    if (!at_end() && src_[pos_] == '^') {
      cls.negated = true;
      ++pos_;
    }
    bool first = true;
    while (true) {
      if (at_end()) fail("unterminated character class", cls.begin);
      if (src_[pos_] == ']' && !first) break;
      first = false;
      auto lo = class_member(cls);
      if (lo && pos_ + 1 < src_.size() && src_[pos_] == '-' && src_[pos_ + 1] != ']') {
        ++pos_;
        auto hi = class_member(cls);
        if (!hi) {
          // "a-\d": the '-' is literal.
          cls.ranges.push_back({*lo, *lo});
          cls.ranges.push_back({U'-', U'-'});
          continue;
        }
        if (*hi < *lo) fail("class range out of order", cls.begin);
        cls.ranges.push_back({*lo, *hi});
      } else if (lo) {
        cls.ranges.push_back({*lo, *lo});
      }
    }
    ++pos_;  // ']'
    cls.end = pos_;
    return cls;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Node parse(std::string_view pattern) { return Parser(pattern).parse_all(); }

std::vector<bool> syntax_positions(std::string_view pattern) {
  std::vector<bool> out(pattern.size(), false);
  std::size_t i = 0;
  while (i < pattern.size()) {
    const char c = pattern[i];
    if ((static_cast<unsigned char>(c) & 0xC0) == 0x80) {
      ++i;
      continue;
    }
    out[i] = true;
    if (c == '\\') {
      i += 2;
      continue;
    }
    if (c != '[') {
      ++i;
      continue;
    }
    // Skip the class body; none of it is a syntax position.
    ++i;
    if (i < pattern.size() && pattern[i] == '^') ++i;
    if (i < pattern.size() && pattern[i] == ']') ++i;
    while (i < pattern.size() && pattern[i] != ']') {
      if (pattern[i] == '\\') {
        i += 2;
      } else if (pattern.substr(i).starts_with("[:") &&
                 pattern.find(":]", i + 2) != std::string_view::npos) {
        i = pattern.find(":]", i + 2) + 2;
      } else {
        ++i;
      }
    }
    ++i;  // ']'
  }
  return out;
}

bool is_inert_alternative(std::string_view alternative) {
  return alternative.starts_with("(?!x)x");
}

}  // namespace topickit::syntax
