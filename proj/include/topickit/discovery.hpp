#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "topickit/corpus.hpp"
#include "topickit/matcher.hpp"

namespace topickit {

// (key, weight) pairs in descending weight, ties in ascending key order.
using Ranking = std::vector<std::pair<std::string, std::uint64_t>>;

// Weighted document frequency of tokens over documents the filter matches
// (all documents when `filter` is null). Throws Error(kEmptySelection) when
// no document is selected and Error(kInvalidArgument) when k < 1.
Ranking top_words(const Corpus& corpus, const CompiledTopicMatcher* filter, std::size_t k,
                  int jobs = 0);

// Tokens within `window` tokens before or after each match occurrence, one
// count per occurrence, weighted by document. Throws Error(kEmptySelection)
// when the seed matches nowhere.
Ranking cooccurring_words(const Corpus& corpus, const CompiledTopicMatcher& seed,
                          std::size_t window, std::size_t k, int jobs = 0);

struct RatioEntry {
  std::string token;
  double ratio = 0;
  std::uint64_t target_df = 0;
  std::uint64_t background_df = 0;

  friend bool operator==(const RatioEntry&, const RatioEntry&) = default;
};

// Add-one smoothed ratio of normalized document frequencies,
// ((dt+1)/(Nt+1)) / ((db+1)/(Nb+1)), over the union of both vocabularies.
// Ordering compares the exact rationals, so equal ratios tie exactly.
std::vector<RatioEntry> ratio_ranked_words(const Corpus& target, const Corpus& background,
                                           std::size_t k, int jobs = 0);

// Space-joined token n-grams (n in {2, 3}), counted once per document.
Ranking top_ngrams(const Corpus& corpus, int n, const CompiledTopicMatcher* filter,
                   std::size_t k, int jobs = 0);

struct DiffReport {
  std::uint64_t new_total = 0;
  std::uint64_t lost_total = 0;
  Ranking new_top;
  Ranking lost_top;

  friend bool operator==(const DiffReport&, const DiffReport&) = default;
};

// Documents matched by `updated` only (new) and by `old` only (lost). Top
// lists aggregate identical texts.
DiffReport diff_matches(const CompiledTopicMatcher& old, const CompiledTopicMatcher& updated,
                        const Corpus& corpus, std::size_t k, int jobs = 0);

// Sorted ranking from a weight map, truncated to k.
Ranking rank(const std::map<std::string, std::uint64_t>& weights, std::size_t k);

}  // namespace topickit
