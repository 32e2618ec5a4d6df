#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "topickit/corpus.hpp"
#include "topickit/matcher.hpp"

namespace topickit {

struct ConfusionReport {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;
  // Absent when the denominator is zero.
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;

  friend bool operator==(const ConfusionReport&, const ConfusionReport&) = default;
};

// Fills the ratios from the four counts.
ConfusionReport make_confusion(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn,
                               std::uint64_t tn);

// Throws Error(kUnlabeledDoc) naming the first unlabeled document.
ConfusionReport confusion_eval(const CompiledTopicMatcher& m, const Corpus& corpus, int jobs = 0);

enum class SafeScope { kMatchedByMain, kAll };

struct ResidualDoc {
  std::string id;
  std::string text;
  std::vector<std::string> snippets;  // from the main matcher
};

// Counts are documents, not weights.
struct SafeConfirmReport {
  std::uint64_t considered = 0;
  std::uint64_t auto_confirmed = 0;
  double fraction = 0;
  std::vector<std::string> residual_ids;
  std::vector<ResidualDoc> residual;
};

// Throws Error(kEmptySelection) when the scope holds no documents.
SafeConfirmReport safe_confirm(const CompiledTopicMatcher& main, const CompiledTopicMatcher& safe,
                               const Corpus& corpus, SafeScope scope, int jobs = 0);

struct RecallGain {
  std::uint64_t base_weight = 0;
  std::uint64_t improved_weight = 0;
  double ratio = 0;
};

// Match-count ratio; assumes both matchers are high precision. Throws
// Error(kZeroBase) when the base matches nothing.
RecallGain recall_gain(const CompiledTopicMatcher& base, const CompiledTopicMatcher& improved,
                       const Corpus& corpus, int jobs = 0);

// "+68.4%" for ratios below 2, "×9.6" otherwise.
std::string format_gain(double ratio);

struct UnionDoc {
  std::string id;
  std::string text;
  bool matched_a = false;
  bool matched_b = false;
};

// Documents matched by at least one of two classifiers, in corpus order.
std::vector<UnionDoc> union_sample(const CompiledTopicMatcher& a, const CompiledTopicMatcher& b,
                                   const Corpus& corpus, int jobs = 0);

struct TimingBucket {
  std::size_t text_chars = 0;  // bucket upper bound, multiple of 1000
  double mean_ms = 0;
  double std_ms = 0;
  double early_mean_ms = 0;
  double early_std_ms = 0;
  int reps = 0;  // timed samples per mode
};

struct TimingReport {
  std::vector<TimingBucket> buckets;  // ascending text_chars
};

// Single-threaded wall-clock timing of classify (full) and matches (early)
// per text; one warm-up call per text and mode is discarded. Throws
// Error(kInvalidArgument) when reps < 3.
TimingReport bench(const CompiledTopicMatcher& m, const std::vector<std::string>& texts, int reps);

// Rounds a code point length up to the next multiple of 1000.
std::size_t bucket_for(std::size_t chars);

}  // namespace topickit
