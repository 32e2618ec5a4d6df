#include "topickit/evaluator.hpp"

#include <chrono>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "topickit/error.hpp"
#include "topickit/scan.hpp"
#include "topickit/unicode.hpp"

namespace topickit {
namespace {

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

struct Stats {
  double mean = 0;
  double std = 0;
};

Stats stats(const std::vector<double>& xs) {
  Stats s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double sq = 0;
    for (double x : xs) sq += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(sq / static_cast<double>(xs.size() - 1));
  }
  return s;
}

template <typename Fn>
double time_ms(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

}  // namespace

ConfusionReport make_confusion(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn,
                               std::uint64_t tn) {
  ConfusionReport r{tp, fp, fn, tn, {}, {}, {}};
  r.accuracy = ratio(tp + tn, tp + fp + fn + tn);
  r.precision = ratio(tp, tp + fp);
  r.recall = ratio(tp, tp + fn);
  return r;
}

ConfusionReport confusion_eval(const CompiledTopicMatcher& m, const Corpus& corpus, int jobs) {
  for (const auto& doc : corpus.docs) {
    if (!doc.label) throw Error(ErrorCode::kUnlabeledDoc, "document has no label", doc.id);
  }
  const auto decisions = scan::match_decisions(m, corpus, jobs);
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
    const auto& doc = corpus.docs[i];
    const bool positive = *doc.label == Label::kPositive;
    if (decisions[i]) {
      (positive ? tp : fp) += doc.weight;
    } else {
      (positive ? fn : tn) += doc.weight;
    }
  }
  return make_confusion(tp, fp, fn, tn);
}

SafeConfirmReport safe_confirm(const CompiledTopicMatcher& main, const CompiledTopicMatcher& safe,
                               const Corpus& corpus, SafeScope scope, int jobs) {
  const auto in_main = scan::match_decisions(main, corpus, jobs);
  const auto in_safe = scan::match_decisions(safe, corpus, jobs);
  SafeConfirmReport r;
  for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
    if (scope == SafeScope::kMatchedByMain && !in_main[i]) continue;
    ++r.considered;
    if (in_safe[i]) {
      ++r.auto_confirmed;
      continue;
    }
    const auto& doc = corpus.docs[i];
    r.residual_ids.push_back(doc.id);
    r.residual.push_back(ResidualDoc{doc.id, doc.text, main.classify(doc.text).snippets});
  }
  if (r.considered == 0) throw Error(ErrorCode::kEmptySelection, "no document in scope", corpus.name);
  r.fraction = static_cast<double>(r.auto_confirmed) / static_cast<double>(r.considered);
  return r;
}

RecallGain recall_gain(const CompiledTopicMatcher& base, const CompiledTopicMatcher& improved,
                       const Corpus& corpus, int jobs) {
  const auto b = scan::match_decisions(base, corpus, jobs);
  const auto im = scan::match_decisions(improved, corpus, jobs);
  RecallGain g;
  for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
    if (b[i]) g.base_weight += corpus.docs[i].weight;
    if (im[i]) g.improved_weight += corpus.docs[i].weight;
  }
  if (g.base_weight == 0) throw Error(ErrorCode::kZeroBase, "base matcher matches nothing", corpus.name);
  g.ratio = static_cast<double>(g.improved_weight) / static_cast<double>(g.base_weight);
  return g;
}

std::string format_gain(double r) {
  if (r < 2.0) return fmt::format("{:+.1f}%", (r - 1.0) * 100.0);
  return fmt::format("×{:.1f}", r);
}

std::vector<UnionDoc> union_sample(const CompiledTopicMatcher& a, const CompiledTopicMatcher& b,
                                   const Corpus& corpus, int jobs) {
  const auto in_a = scan::match_decisions(a, corpus, jobs);
  const auto in_b = scan::match_decisions(b, corpus, jobs);
  std::vector<UnionDoc> out;
  for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
    if (!in_a[i] && !in_b[i]) continue;
    out.push_back(UnionDoc{corpus.docs[i].id, corpus.docs[i].text, in_a[i] != 0, in_b[i] != 0});
  }
  return out;
}

std::size_t bucket_for(std::size_t chars) { return (chars + 999) / 1000 * 1000; }

TimingReport bench(const CompiledTopicMatcher& m, const std::vector<std::string>& texts, int reps) {
  if (reps < 3) throw Error(ErrorCode::kInvalidArgument, "reps must be >= 3");
  struct Samples {
    std::vector<double> full;
    std::vector<double> early;
  };
  std::map<std::size_t, Samples> by_bucket;
  volatile std::size_t sink = 0;
  for (const auto& text : texts) {
    Samples& s = by_bucket[bucket_for(unicode::codepoint_count(text))];
    sink = sink + m.classify(text).snippets.size();
    for (int r = 0; r < reps; ++r) {
      s.full.push_back(time_ms([&] { sink = sink + m.classify(text).snippets.size(); }));
    }
    sink = sink + m.matches(text);
    for (int r = 0; r < reps; ++r) {
      s.early.push_back(time_ms([&] { sink = sink + m.matches(text); }));
    }
  }
  TimingReport report;
  for (const auto& [chars, s] : by_bucket) {
    const Stats full = stats(s.full);
    const Stats early = stats(s.early);
    report.buckets.push_back(TimingBucket{chars, full.mean, full.std, early.mean, early.std,
                                          static_cast<int>(s.full.size())});
  }
  return report;
}

}  // namespace topickit
