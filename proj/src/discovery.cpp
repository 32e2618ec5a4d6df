#include "topickit/discovery.hpp"

#include <algorithm>
#include <atomic>
#include <set>

#include "topickit/error.hpp"
#include "topickit/scan.hpp"

namespace topickit {
namespace {

void require_k(std::size_t k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
}

std::vector<std::string> distinct(std::vector<std::string> keys) {
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

std::vector<std::uint8_t> selection(const Corpus& corpus, const CompiledTopicMatcher* filter,
                                    int jobs) {
  std::vector<std::uint8_t> selected(corpus.docs.size(), 1);
  if (filter) selected = scan::match_decisions(*filter, corpus, jobs);
  if (std::find(selected.begin(), selected.end(), 1) == selected.end()) {
    throw Error(ErrorCode::kEmptySelection, "no document passes the filter", corpus.name);
  }
  return selected;
}

std::vector<std::string> ngrams(const std::vector<std::string>& tokens, int n) {
  std::vector<std::string> out;
  const auto len = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
    std::string gram = tokens[i];
    for (std::size_t j = 1; j < len; ++j) gram += " " + tokens[i + j];
    out.push_back(std::move(gram));
  }
  return out;
}

}  // namespace

Ranking rank(const std::map<std::string, std::uint64_t>& weights, std::size_t k) {
  Ranking out(weights.begin(), weights.end());
  // The map is key-ordered, so a stable sort on weight keeps lexicographic ties.
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (out.size() > k) out.resize(k);
  return out;
}

Ranking top_words(const Corpus& corpus, const CompiledTopicMatcher* filter, std::size_t k,
                  int jobs) {
  require_k(k);
  const auto selected = selection(corpus, filter, jobs);
  return rank(scan::weighted_counts(
                  corpus,
                  [&](std::size_t i) -> std::vector<std::string> {
                    if (!selected[i]) return {};
                    return distinct(tokenize(corpus.docs[i].text));
                  },
                  jobs),
              k);
}

Ranking cooccurring_words(const Corpus& corpus, const CompiledTopicMatcher& seed,
                          std::size_t window, std::size_t k, int jobs) {
  require_k(k);
  if (window < 1) throw Error(ErrorCode::kInvalidArgument, "window must be >= 1");
  std::atomic<bool> any_match{false};
  const auto counts = scan::weighted_counts(
      corpus,
      [&](std::size_t i) {
        std::vector<std::string> out;
        const ScanResult scanned = seed.scan(corpus.docs[i].text);
        if (scanned.vetoed || scanned.spans.empty()) return out;
        any_match = true;
        const auto tokens = tokenize_folded(scanned.text);
        for (const Span& s : scanned.spans) {
          // Tokens entirely before the match, then entirely after it.
          std::size_t before_end = 0;
          while (before_end < tokens.size() && tokens[before_end].end <= s.begin) ++before_end;
          std::size_t after_begin = before_end;
          while (after_begin < tokens.size() && tokens[after_begin].begin < s.end) ++after_begin;
          const std::size_t lo = before_end > window ? before_end - window : 0;
          for (std::size_t t = lo; t < before_end; ++t) out.push_back(tokens[t].text);
          for (std::size_t t = after_begin; t < tokens.size() && t < after_begin + window; ++t) {
            out.push_back(tokens[t].text);
          }
        }
        return out;
      },
      jobs);
  if (!any_match) throw Error(ErrorCode::kEmptySelection, "seed matches no document", corpus.name);
  return rank(counts, k);
}

std::vector<RatioEntry> ratio_ranked_words(const Corpus& target, const Corpus& background,
                                           std::size_t k, int jobs) {
  require_k(k);
  if (target.docs.empty() || background.docs.empty()) {
    throw Error(ErrorCode::kEmptySelection, "ratio ranking needs two nonempty corpora");
  }
  auto doc_tokens = [](const Corpus& c) {
    return [&c](std::size_t i) { return distinct(tokenize(c.docs[i].text)); };
  };
  const auto df_t = scan::weighted_counts(target, doc_tokens(target), jobs);
  const auto df_b = scan::weighted_counts(background, doc_tokens(background), jobs);
  // Cross-multiplied comparisons stay inside 128 bits while both weights
  // are below 2^31.
  constexpr std::uint64_t kWeightLimit = std::uint64_t{1} << 31;
  if (target.total_weight() >= kWeightLimit || background.total_weight() >= kWeightLimit) {
    throw Error(ErrorCode::kInvalidArgument, "corpus weight too large for exact ratio ranking");
  }
  const unsigned __int128 nt = target.total_weight() + 1;
  const unsigned __int128 nb = background.total_weight() + 1;

  struct Row {
    RatioEntry entry;
    unsigned __int128 num;  // (dt+1)(Nb+1)
    unsigned __int128 den;  // (db+1)(Nt+1)
  };
  std::set<std::string> vocabulary;
  for (const auto& [t, w] : df_t) vocabulary.insert(t);
  for (const auto& [t, w] : df_b) vocabulary.insert(t);
  std::vector<Row> rows;
  rows.reserve(vocabulary.size());
  for (const auto& token : vocabulary) {
    const auto it_t = df_t.find(token);
    const auto it_b = df_b.find(token);
    const std::uint64_t dt = it_t == df_t.end() ? 0 : it_t->second;
    const std::uint64_t db = it_b == df_b.end() ? 0 : it_b->second;
    Row row;
    row.num = (static_cast<unsigned __int128>(dt) + 1) * nb;
    row.den = (static_cast<unsigned __int128>(db) + 1) * nt;
    row.entry = RatioEntry{token, static_cast<double>(row.num) / static_cast<double>(row.den), dt, db};
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.num * b.den > b.num * a.den;
  });
  std::vector<RatioEntry> out;
  for (std::size_t i = 0; i < rows.size() && i < k; ++i) out.push_back(rows[i].entry);
  return out;
}

Ranking top_ngrams(const Corpus& corpus, int n, const CompiledTopicMatcher* filter,
                   std::size_t k, int jobs) {
  require_k(k);
  if (n != 2 && n != 3) throw Error(ErrorCode::kInvalidArgument, "n must be 2 or 3");
  const auto selected = selection(corpus, filter, jobs);
  return rank(scan::weighted_counts(
                  corpus,
                  [&](std::size_t i) -> std::vector<std::string> {
                    if (!selected[i]) return {};
                    return distinct(ngrams(tokenize(corpus.docs[i].text), n));
                  },
                  jobs),
              k);
}

DiffReport diff_matches(const CompiledTopicMatcher& old, const CompiledTopicMatcher& updated,
                        const Corpus& corpus, std::size_t k, int jobs) {
  require_k(k);
  const auto before = scan::match_decisions(old, corpus, jobs);
  const auto after = scan::match_decisions(updated, corpus, jobs);
  std::map<std::string, std::uint64_t> gained;
  std::map<std::string, std::uint64_t> lost;
  DiffReport r;
  for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
    const auto& doc = corpus.docs[i];
    if (after[i] && !before[i]) {
      r.new_total += doc.weight;
      gained[doc.text] += doc.weight;
    } else if (before[i] && !after[i]) {
      r.lost_total += doc.weight;
      lost[doc.text] += doc.weight;
    }
  }
  r.new_top = rank(gained, k);
  r.lost_top = rank(lost, k);
  return r;
}

}  // namespace topickit
