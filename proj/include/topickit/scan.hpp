#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "topickit/corpus.hpp"
#include "topickit/matcher.hpp"

// Corpus scan kernels. Each has an OpenMP version and a serial reference
// with identical results; `jobs` <= 0 means the OpenMP default.
namespace topickit::scan {

int resolve_jobs(int jobs);

// Runs fn(i) for i in [0, n). The first exception thrown by any iteration is
// rethrown after the loop.
void for_each_index(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);
void for_each_index_serial(std::size_t n, const std::function<void(std::size_t)>& fn);

// decisions[i] = matcher.matches(corpus.docs[i].text).
std::vector<std::uint8_t> match_decisions(const CompiledTopicMatcher& matcher,
                                          const Corpus& corpus, int jobs);
std::vector<std::uint8_t> match_decisions_serial(const CompiledTopicMatcher& matcher,
                                                 const Corpus& corpus);

using WeightMap = std::map<std::string, std::uint64_t>;
// Keys emitted for one document; each emitted key adds the document weight.
using KeyExtractor = std::function<std::vector<std::string>(std::size_t doc)>;

WeightMap weighted_counts(const Corpus& corpus, const KeyExtractor& keys, int jobs);
WeightMap weighted_counts_serial(const Corpus& corpus, const KeyExtractor& keys);

}  // namespace topickit::scan
