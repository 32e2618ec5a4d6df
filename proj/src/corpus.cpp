#include "topickit/corpus.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "topickit/error.hpp"
#include "topickit/unicode.hpp"

namespace topickit {
namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void bad_row(std::size_t line, const std::string& why) {
  throw Error(ErrorCode::kMalformedRow, why, "row " + std::to_string(line));
}

Document parse_tsv_row(std::string_view row, std::size_t line) {
  const auto fields = split(row, '\t');
  if (fields.size() > 3) bad_row(line, "expected at most 3 tab-separated columns");
  Document doc;
  doc.id = std::to_string(line);
  doc.text = std::string(fields[0]);
  if (fields.size() >= 2) {
    const auto w = fields[1];
    std::uint64_t weight = 0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), weight);
    if (ec != std::errc() || ptr != w.data() + w.size() || weight < 1) {
      bad_row(line, "weight must be an integer >= 1");
    }
    doc.weight = weight;
  }
  if (fields.size() == 3) {
    if (fields[2] == "1") {
      doc.label = Label::kPositive;
    } else if (fields[2] == "0") {
      doc.label = Label::kNegative;
    } else if (fields[2] != "-") {
      bad_row(line, "label must be 1, 0 or -");
    }
  }
  return doc;
}

}  // namespace

std::uint64_t Corpus::total_weight() const {
  std::uint64_t total = 0;
  for (const auto& d : docs) total += d.weight;
  return total;
}

CorpusFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".tsv" ? CorpusFormat::kTsv : CorpusFormat::kTxt;
}

Corpus parse_corpus(std::string_view bytes, CorpusFormat format, std::string name) {
  Corpus corpus;
  corpus.name = std::move(name);
  const auto lines = split(bytes, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view row = lines[i];
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
    if (row.empty()) continue;
    const std::size_t line = i + 1;
    if (!unicode::is_valid_utf8(row)) bad_row(line, "invalid UTF-8");
    if (format == CorpusFormat::kTxt) {
      corpus.docs.push_back(Document{std::to_string(line), std::string(row), 1, std::nullopt});
    } else {
      corpus.docs.push_back(parse_tsv_row(row, line));
    }
  }
  return corpus;
}

Corpus ingest(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read corpus", path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoError, "read failed", path.string());
  return parse_corpus(buffer.str(), format, path.stem().string());
}

Corpus ingest(const std::filesystem::path& path) { return ingest(path, format_for_path(path)); }

std::vector<Token> tokenize_folded(std::u32string_view folded) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < folded.size()) {
    if (!unicode::is_word_char(folded[i])) {
      ++i;
      continue;
    }
    std::size_t begin = i;
    while (i < folded.size() && unicode::is_word_char(folded[i])) ++i;
    if (begin > 0 && folded[begin - 1] == U'#') --begin;
    out.push_back(Token{unicode::to_utf8(folded.substr(begin, i - begin)), begin, i});
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize_folded(unicode::to_utf32(unicode::case_fold(text)))) {
    out.push_back(std::move(t.text));
  }
  return out;
}

}  // namespace topickit
