#include "topickit/profiler.hpp"

#include <algorithm>
#include <optional>

#include <fmt/format.h>

#include "topickit/engine.hpp"
#include "topickit/error.hpp"
#include "topickit/matcher.hpp"
#include "topickit/regex_syntax.hpp"
#include "topickit/scan.hpp"
#include "topickit/unicode.hpp"

namespace topickit {
namespace {

using syntax::GroupKind;
using syntax::Node;
using syntax::NodeKind;

struct Candidate {
  ChunkKind kind;
  ByteSpan span;
  bool guarding;
};

// Lower wins when equal texts come from different kinds.
int priority(ChunkKind kind) {
  switch (kind) {
    case ChunkKind::kClause: return 0;
    case ChunkKind::kGroup: return 1;
    case ChunkKind::kLiteralWord: return 2;
    case ChunkKind::kCharClass: return 3;
    case ChunkKind::kQuantifiedGap: return 4;
  }
  return 5;
}

bool is_lookaround(const Node& n) {
  return n.kind == NodeKind::kGroup &&
         (n.group == GroupKind::kNegativeLookahead || n.group == GroupKind::kPositiveLookahead ||
          n.group == GroupKind::kNegativeLookbehind || n.group == GroupKind::kPositiveLookbehind);
}

bool is_word_literal(const Node& n) {
  return n.kind == NodeKind::kLiteral && !n.escaped && n.literal != U'_' &&
         unicode::is_word_char(n.literal);
}

bool is_plain_class(const Node& n) { return n.kind == NodeKind::kClass && !n.negated; }

bool is_wildcard(const Node& n) {
  if (n.kind == NodeKind::kDot) return true;
  if (n.kind != NodeKind::kEscape) return false;
  switch (n.escape) {
    case U'd': case U'D': case U'w': case U'W': case U's': case U'S': case U'p': case U'P':
    case U'h': case U'H': case U'v': case U'V':
      return true;
    default:
      return false;
  }
}

// Atom of a spelled word: a letter, a class, or either made optional.
const Node* word_atom(const Node& n) {
  const Node* a = &n;
  if (n.kind == NodeKind::kQuantified) {
    if (n.min != 0 || !n.max || *n.max != 1 || n.possessive) return nullptr;
    a = &n.children.front();
  }
  return (is_word_literal(*a) || is_plain_class(*a)) ? a : nullptr;
}

void sequence_words(const Node& seq, bool guarding, std::vector<Candidate>& out) {
  const auto& items = seq.children;
  // Maximal unquantified literal runs.
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    while (j < items.size() && is_word_literal(items[j])) ++j;
    if (j - i >= 3) {
      out.push_back({ChunkKind::kLiteralWord, {items[i].begin, items[j - 1].end}, guarding});
    }
    i = j == i ? i + 1 : j;
  }
  // Maximal spelled-word runs mixing literals and classes, with their
  // literal-plus-class tails.
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    bool has_class = false;
    bool has_literal = false;
    while (j < items.size()) {
      const Node* a = word_atom(items[j]);
      if (!a) break;
      (a->kind == NodeKind::kClass ? has_class : has_literal) = true;
      ++j;
    }
    if (j - i >= 3 && has_class && has_literal) {
      out.push_back({ChunkKind::kLiteralWord, {items[i].begin, items[j - 1].end}, guarding});
      for (std::size_t t = i + 1; t < j; ++t) {
        const Node* a = word_atom(items[t]);
        if (a->kind == NodeKind::kClass && is_word_literal(items[t - 1])) {
          out.push_back({ChunkKind::kLiteralWord, {items[t - 1].begin, items[t].end}, guarding});
        }
      }
    }
    i = j == i ? i + 1 : j;
  }
}

void collect(const Node& clause, std::vector<Candidate>& out) {
  syntax::visit(clause, [&](const Node& n, int depth) {
    const bool guarding = depth > 0 || is_lookaround(n);
    switch (n.kind) {
      case NodeKind::kGroup:
        if (n.group != GroupKind::kOther && !n.children.empty()) {
          out.push_back({ChunkKind::kGroup, {n.begin, n.end}, guarding});
        }
        break;
      case NodeKind::kClass:
        out.push_back({ChunkKind::kCharClass, {n.begin, n.end}, guarding});
        break;
      case NodeKind::kQuantified:
        if (is_wildcard(n.children.front())) {
          out.push_back({ChunkKind::kQuantifiedGap, {n.begin, n.end}, guarding});
        }
        break;
      case NodeKind::kSequence:
        sequence_words(n, guarding, out);
        break;
      default:
        break;
    }
  });
}

std::uint64_t weight_where(const Corpus& c, const std::vector<std::uint8_t>& a,
                           const std::vector<std::uint8_t>& b, bool a_value, bool b_value) {
  std::uint64_t w = 0;
  for (std::size_t i = 0; i < c.docs.size(); ++i) {
    if ((a[i] != 0) == a_value && (b[i] != 0) == b_value) w += c.docs[i].weight;
  }
  return w;
}

std::vector<std::uint8_t> decisions_for(std::string_view regex, const Corpus& corpus, int jobs) {
  return scan::match_decisions(CompiledTopicMatcher::compile(regex), corpus, jobs);
}

double pct(std::uint64_t part, std::uint64_t whole) {
  return static_cast<double>(part) * 100.0 / static_cast<double>(whole);
}

bool has_clause(std::string_view regex) {
  const Node root = syntax::parse(regex);
  return std::any_of(root.children.begin(), root.children.end(), [&](const Node& alt) {
    const auto text = regex.substr(alt.begin, alt.end - alt.begin);
    return !text.empty() && !syntax::is_inert_alternative(text);
  });
}

}  // namespace

std::string_view to_string(ChunkKind kind) {
  switch (kind) {
    case ChunkKind::kClause: return "CLAUSE";
    case ChunkKind::kGroup: return "GROUP";
    case ChunkKind::kCharClass: return "CHAR_CLASS";
    case ChunkKind::kLiteralWord: return "LITERAL_WORD";
    case ChunkKind::kQuantifiedGap: return "QUANTIFIED_GAP";
  }
  return "UNKNOWN";
}

std::vector<Chunk> decompose(std::string_view regex) {
  if (auto err = compile_error(regex)) {
    throw Error(ErrorCode::kCompileFail, err->message, "offset " + std::to_string(err->offset));
  }
  const Node root = syntax::parse(regex);
  std::vector<Candidate> found;
  for (const Node& alt : root.children) {
    const auto text = regex.substr(alt.begin, alt.end - alt.begin);
    if (text.empty() || syntax::is_inert_alternative(text)) continue;
    found.push_back({ChunkKind::kClause, {alt.begin, alt.end}, false});
    collect(alt, found);
  }

  std::vector<Chunk> chunks;
  auto find_chunk = [&](std::string_view text) -> Chunk* {
    for (auto& c : chunks) {
      if (c.text == text) return &c;
    }
    return nullptr;
  };
  for (const auto& cand : found) {
    const auto text = regex.substr(cand.span.begin, cand.span.end - cand.span.begin);
    Chunk* c = find_chunk(text);
    if (!c) {
      chunks.push_back(Chunk{std::string(text), cand.kind, {}, false});
      c = &chunks.back();
    } else if (priority(cand.kind) < priority(c->kind)) {
      c->kind = cand.kind;
    }
    c->occurrences.push_back(cand.span);
    c->precision_guarding = c->precision_guarding || cand.guarding;
  }
  for (auto& c : chunks) {
    auto& occ = c.occurrences;
    std::sort(occ.begin(), occ.end());
    occ.erase(std::unique(occ.begin(), occ.end()), occ.end());
    std::vector<ByteSpan> kept;
    for (const auto& s : occ) {
      if (kept.empty() || s.begin >= kept.back().end) kept.push_back(s);
    }
    occ = std::move(kept);
  }
  std::stable_sort(chunks.begin(), chunks.end(), [](const Chunk& a, const Chunk& b) {
    const auto& sa = a.occurrences.front();
    const auto& sb = b.occurrences.front();
    if (sa.begin != sb.begin) return sa.begin < sb.begin;
    if (sa.end != sb.end) return sa.end > sb.end;
    return priority(a.kind) < priority(b.kind);
  });
  return chunks;
}

std::string ablate(std::string_view regex, const Chunk& chunk) {
  std::string out(regex);
  for (auto it = chunk.occurrences.rbegin(); it != chunk.occurrences.rend(); ++it) {
    if (it->end > regex.size() || regex.substr(it->begin, it->end - it->begin) != chunk.text) {
      throw Error(ErrorCode::kInvalidArgument, "chunk span does not hold the chunk text",
                  "offset " + std::to_string(it->begin));
    }
    out.replace(it->begin, it->end - it->begin, kAblationLiteral);
  }
  if (auto err = compile_error(out)) {
    throw Error(ErrorCode::kAblationInvalid, err->message, chunk.text);
  }
  return out;
}

std::string remove_clause(std::string_view regex, const Chunk& clause) {
  std::string out(regex);
  for (auto it = clause.occurrences.rbegin(); it != clause.occurrences.rend(); ++it) {
    std::size_t begin = it->begin;
    std::size_t end = it->end;
    if (begin > 0 && out[begin - 1] == '|') {
      --begin;
    } else if (end < out.size() && out[end] == '|') {
      ++end;
    }
    out.erase(begin, end - begin);
  }
  return out;
}

ProfileReport profile(std::string_view regex, const std::vector<Corpus>& corpora, int jobs) {
  if (corpora.empty()) throw Error(ErrorCode::kInvalidArgument, "profile needs a corpus");
  const auto chunks = decompose(regex);
  ProfileReport report;

  struct Active {
    const Corpus* corpus;
    std::vector<std::uint8_t> baseline;
    std::uint64_t weight;
  };
  std::vector<Active> active;
  const auto main_decisions = [&](const Corpus& c) { return decisions_for(regex, c, jobs); };
  for (const auto& c : corpora) {
    auto base = main_decisions(c);
    const std::uint64_t w = weight_where(c, base, base, true, true);
    for (const auto& d : c.docs) {
      if (unicode::case_fold(d.text).find(kAblationLiteral) != std::string::npos) {
        report.warnings.push_back(
            fmt::format("corpus {} document {} contains \"{}\"", c.name, d.id, kAblationLiteral));
      }
    }
    if (w == 0) {
      report.skipped_corpora.push_back(c.name);
      continue;
    }
    report.corpora.push_back(c.name);
    report.baseline_weight[c.name] = w;
    active.push_back(Active{&c, std::move(base), w});
  }
  if (active.empty()) throw Error(ErrorCode::kEmptyBaseline, "regex matches no corpus document");

  for (const auto& chunk : chunks) {
    ProfileRow row;
    row.chunk = chunk;
    std::optional<std::string> ablated;
    try {
      ablated = ablate(regex, chunk);
    } catch (const Error& e) {
      row.skipped = true;
      row.skip_reason = e.what();
    }
    if (ablated) {
      const auto matcher = CompiledTopicMatcher::compile(*ablated);
      for (const auto& a : active) {
        const auto after = scan::match_decisions(matcher, *a.corpus, jobs);
        const std::uint64_t lost = weight_where(*a.corpus, a.baseline, after, true, false);
        const std::uint64_t gained = weight_where(*a.corpus, a.baseline, after, false, true);
        const auto& name = a.corpus->name;
        row.lost_weight[name] = lost;
        row.gained_weight[name] = gained;
        row.loss_pct[name] = pct(lost, a.weight);
        row.gain_pct[name] = pct(gained, a.weight);
        row.max_loss = std::max(row.max_loss, row.loss_pct[name]);
      }
    }
    report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const ProfileRow& a, const ProfileRow& b) {
                     if (a.skipped != b.skipped) return b.skipped;
                     return a.max_loss > b.max_loss;
                   });
  return report;
}

DistillResult distill(std::string_view regex, const Corpus& calibration, double loss_budget_pct,
                      int jobs) {
  if (loss_budget_pct < 0) throw Error(ErrorCode::kInvalidArgument, "budget must be >= 0");
  (void)decompose(regex);
  const auto baseline = decisions_for(regex, calibration, jobs);
  const std::uint64_t base_weight = weight_where(calibration, baseline, baseline, true, true);
  if (base_weight == 0) {
    throw Error(ErrorCode::kEmptyBaseline, "regex matches no calibration document", calibration.name);
  }
  auto cumulative_loss = [&](std::string_view candidate) {
    const auto after = decisions_for(candidate, calibration, jobs);
    return pct(weight_where(calibration, baseline, after, true, false), base_weight);
  };

  DistillResult result;
  std::string current(regex);
  while (true) {
    std::optional<std::pair<double, std::size_t>> best;
    std::vector<std::string> candidates;
    const auto chunks = decompose(current);
    for (std::size_t i = 0; i < chunks.size(); ++i) {
      const Chunk& chunk = chunks[i];
      std::string next;
      // Chunks already holding the ablation literal are dead; touching them
      // again could cycle.
      if (!chunk.precision_guarding &&
          chunk.text.find(kAblationLiteral) == std::string::npos) {
        if (chunk.kind == ChunkKind::kClause) {
          next = remove_clause(current, chunk);
          if (compile_error(next) || !has_clause(next)) next.clear();
        } else {
          try {
            next = ablate(current, chunk);
          } catch (const Error&) {
            next.clear();
          }
        }
      }
      if (next == current) next.clear();
      candidates.push_back(next);
      if (next.empty()) continue;
      const double loss = cumulative_loss(next);
      if (!best || loss < best->first) best = std::make_pair(loss, i);
    }
    if (!best || !(best->first < loss_budget_pct)) break;
    result.suggested_removals.push_back(chunks[best->second]);
    current = std::move(candidates[best->second]);
  }
  result.final_regex = current;
  result.final_loss_pct = cumulative_loss(current);
  return result;
}

}  // namespace topickit
