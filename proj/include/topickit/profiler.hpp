#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "topickit/corpus.hpp"

namespace topickit {

inline constexpr std::string_view kAblationLiteral = "foobar123";

enum class ChunkKind { kClause, kGroup, kCharClass, kLiteralWord, kQuantifiedGap };

std::string_view to_string(ChunkKind kind);

struct ByteSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const ByteSpan&, const ByteSpan&) = default;
  friend auto operator<=>(const ByteSpan&, const ByteSpan&) = default;
};

struct Chunk {
  std::string text;
  ChunkKind kind = ChunkKind::kClause;
  std::vector<ByteSpan> occurrences;  // ascending, non-overlapping
  // Some occurrence is a lookaround or sits inside one.
  bool precision_guarding = false;

  friend bool operator==(const Chunk&, const Chunk&) = default;
};

// Clauses (top-level alternatives except inert ones), groups, character
// classes, literal words (alphanumeric runs of 3+, runs mixing literals and
// classes such as "c[o0]vi[dt]", and literal-plus-class tails such as
// "i[dt]") and quantified wildcards such as ".{0,80}?". Chunks with equal
// text are merged. Ordered by first occurrence. Throws Error(kCompileFail).
std::vector<Chunk> decompose(std::string_view regex);

// Replaces every occurrence of `chunk` by kAblationLiteral. Throws
// Error(kAblationInvalid) when the result does not compile and
// Error(kInvalidArgument) when the spans do not hold the chunk text.
std::string ablate(std::string_view regex, const Chunk& chunk);

struct ProfileRow {
  Chunk chunk;
  std::map<std::string, double> loss_pct;
  std::map<std::string, double> gain_pct;
  std::map<std::string, std::uint64_t> lost_weight;
  std::map<std::string, std::uint64_t> gained_weight;
  double max_loss = 0;
  bool skipped = false;
  std::string skip_reason;
};

struct ProfileReport {
  std::vector<std::string> corpora;          // profiled, in input order
  std::vector<std::string> skipped_corpora;  // empty baseline
  std::map<std::string, std::uint64_t> baseline_weight;
  std::vector<ProfileRow> rows;  // descending max_loss, skipped rows last
  std::vector<std::string> warnings;
};

// Percentages are over baseline-matched weight. Corpora with an empty
// baseline are skipped; throws Error(kEmptyBaseline) if all are.
ProfileReport profile(std::string_view regex, const std::vector<Corpus>& corpora, int jobs = 0);

struct DistillResult {
  std::vector<Chunk> suggested_removals;
  std::string final_regex;
  double final_loss_pct = 0;
};

// Greedy one-at-a-time removal with re-decomposition after each step. The
// cheapest candidate is accepted while its cumulative loss against the
// original baseline stays strictly below the budget. Clauses are deleted,
// other chunks ablated; precision-guarding chunks are never touched.
DistillResult distill(std::string_view regex, const Corpus& calibration, double loss_budget_pct,
                      int jobs = 0);

// `regex` with every occurrence of the clause removed along with one
// adjacent '|'.
std::string remove_clause(std::string_view regex, const Chunk& clause);

}  // namespace topickit
