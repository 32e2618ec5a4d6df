#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace topickit {

enum class Label { kPositive, kNegative };

struct Document {
  std::string id;
  std::string text;
  std::uint64_t weight = 1;
  std::optional<Label> label;

  friend bool operator==(const Document&, const Document&) = default;
};

struct Corpus {
  std::string name;
  std::vector<Document> docs;

  std::uint64_t total_weight() const;
};

enum class CorpusFormat { kTxt, kTsv };

// ".tsv" selects TSV, anything else TXT.
CorpusFormat format_for_path(const std::filesystem::path& path);

// TXT: one document per non-blank line. TSV: text, then optional weight
// (integer >= 1) and label ("1", "0" or "-"). Document ids are 1-based line
// numbers. Throws Error(kMalformedRow) with the line number for bad rows or
// invalid UTF-8.
Corpus parse_corpus(std::string_view bytes, CorpusFormat format, std::string name);

// Throws Error(kIoError) when the file cannot be read. The corpus name is
// the file stem.
Corpus ingest(const std::filesystem::path& path, CorpusFormat format);
Corpus ingest(const std::filesystem::path& path);

struct Token {
  std::string text;
  std::size_t begin = 0;  // code point offsets into the tokenized text
  std::size_t end = 0;
};

// Maximal runs of word characters in `folded`, each with an immediately
// preceding '#' kept. `folded` is expected to be case folded already.
std::vector<Token> tokenize_folded(std::u32string_view folded);

// Case folds, then tokenizes.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace topickit
