#pragma once

#include <cstddef>
#include <string>
#include <string_view>

// Thin UTF-8/UTF-32 helpers over ICU. Invalid UTF-8 sequences decode to
// U+FFFD so downstream code always sees well-formed code points.
namespace topickit::unicode {

std::u32string to_utf32(std::string_view utf8);
std::string to_utf8(std::u32string_view text);
std::string to_utf8(char32_t cp);

bool is_valid_utf8(std::string_view utf8);
std::size_t codepoint_count(std::string_view utf8);

// Full Unicode case folding (e.g. "Straße" -> "strasse").
std::string case_fold(std::string_view utf8);

// Strong right-to-left characters (bidi classes R and AL).
bool is_rtl(char32_t cp);
// Letters, combining marks, decimal digits and underscore.
bool is_word_char(char32_t cp);
bool is_whitespace(char32_t cp);
// Combining marks (general categories Mn, Mc, Me).
bool is_mark(char32_t cp);

}  // namespace topickit::unicode
