#include "topickit/scan.hpp"

#include <exception>
#include <unordered_map>

#include <omp.h>

namespace topickit::scan {

int resolve_jobs(int jobs) { return jobs > 0 ? jobs : omp_get_max_threads(); }

void for_each_index(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  std::exception_ptr failure;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 64) num_threads(resolve_jobs(jobs))
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(topickit_scan_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void for_each_index_serial(std::size_t n, const std::function<void(std::size_t)>& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

std::vector<std::uint8_t> match_decisions(const CompiledTopicMatcher& matcher,
                                          const Corpus& corpus, int jobs) {
  std::vector<std::uint8_t> out(corpus.docs.size(), 0);
  for_each_index(corpus.docs.size(), jobs,
                 [&](std::size_t i) { out[i] = matcher.matches(corpus.docs[i].text) ? 1 : 0; });
  return out;
}

std::vector<std::uint8_t> match_decisions_serial(const CompiledTopicMatcher& matcher,
                                                 const Corpus& corpus) {
  std::vector<std::uint8_t> out(corpus.docs.size(), 0);
  for_each_index_serial(corpus.docs.size(), [&](std::size_t i) {
    out[i] = matcher.matches(corpus.docs[i].text) ? 1 : 0;
  });
  return out;
}

WeightMap weighted_counts(const Corpus& corpus, const KeyExtractor& keys, int jobs) {
  WeightMap total;
  std::exception_ptr failure;
  const auto count = static_cast<std::int64_t>(corpus.docs.size());
#pragma omp parallel num_threads(resolve_jobs(jobs))
  {
    std::unordered_map<std::string, std::uint64_t> local;
#pragma omp for schedule(dynamic, 64) nowait
    for (std::int64_t i = 0; i < count; ++i) {
      try {
        const auto& doc = corpus.docs[static_cast<std::size_t>(i)];
        for (auto& key : keys(static_cast<std::size_t>(i))) local[std::move(key)] += doc.weight;
      } catch (...) {
#pragma omp critical(topickit_scan_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    // Addition commutes, so merge order does not affect the result.
#pragma omp critical(topickit_scan_merge)
    for (auto& [key, weight] : local) total[key] += weight;
  }
  if (failure) std::rethrow_exception(failure);
  return total;
}

WeightMap weighted_counts_serial(const Corpus& corpus, const KeyExtractor& keys) {
  WeightMap total;
  for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
    for (auto& key : keys(i)) total[std::move(key)] += corpus.docs[i].weight;
  }
  return total;
}

}  // namespace topickit::scan
