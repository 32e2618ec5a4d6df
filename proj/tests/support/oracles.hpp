#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "topickit/corpus.hpp"

// Independent reference computations. None of these share code paths with
// the library beyond the regex engine itself.
namespace topickit::testing {

// Every string the fragment denotes, by direct recursive expansion.
// Supports literals, [..] classes with ranges, (..) and (?:..) groups,
// alternation, "?" and "{m,n}". Throws std::invalid_argument otherwise.
std::set<std::string> expand_fragment(std::string_view fragment);

// Weighted docs the regex matches, by full classification of each doc.
std::vector<bool> matched_by(const std::string& live, const Corpus& corpus);

std::uint64_t weight_of(const Corpus& corpus, const std::vector<bool>& a,
                        const std::vector<bool>& b, bool a_value, bool b_value);

// `regex` with each [begin, end) span replaced by `literal`.
std::string substitute(std::string regex, std::vector<std::pair<std::size_t, std::size_t>> spans,
                       std::string_view literal);

struct RecountRow {
  std::uint64_t lost = 0;
  std::uint64_t gained = 0;
  std::uint64_t base = 0;
};
// Per corpus name.
std::map<std::string, RecountRow> ablation_recount(
    const std::string& regex, const std::vector<std::pair<std::size_t, std::size_t>>& spans,
    const std::vector<Corpus>& corpora);

struct Confusion {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
};
Confusion confusion_recount(const std::string& live, const Corpus& labeled);

// Token document frequency with a naive tokenizer re-implementation over
// ASCII text: lowercase, runs of [a-z0-9_], optional leading '#'.
std::map<std::string, std::uint64_t> ascii_doc_frequency(const Corpus& corpus,
                                                         const std::vector<bool>& selected);

}  // namespace topickit::testing
