#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace topickit {

// Half-open code point range into a UTF-32 text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const Span&, const Span&) = default;
};

// A compiled live-form regex. Matching is Unicode-aware (\b, \w, \d follow
// Unicode properties), '.' never matches a newline, and zero-length matches
// are never reported. Instances are immutable and share their compiled
// program, so copies are cheap and concurrent searches are safe.
class Pattern {
 public:
  // Throws Error(kCompileFail) with the engine's byte offset on failure.
  static Pattern compile(std::string_view live);

  const std::string& source() const { return source_; }

  // True when some non-empty match exists.
  bool search(std::u32string_view text) const;
  // Leftmost non-empty match starting at or after `from`.
  std::optional<Span> find(std::u32string_view text, std::size_t from = 0) const;
  // Leftmost, non-overlapping, non-empty matches.
  std::vector<Span> find_all(std::u32string_view text) const;
  // `text` with every match from find_all removed.
  std::u32string remove_all(std::u32string_view text) const;

 private:
  struct Impl;
  Pattern(std::shared_ptr<const Impl> impl, std::string source);

  std::shared_ptr<const Impl> impl_;
  std::string source_;
};

struct CompileDiagnostic {
  std::string message;
  std::size_t offset = 0;
};

// Engine-level compile check with no exception on failure.
std::optional<CompileDiagnostic> compile_error(std::string_view live);

}  // namespace topickit
