#include <gtest/gtest.h>

#include <algorithm>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "topickit/error.hpp"
#include "topickit/matcher.hpp"
#include "topickit/profiler.hpp"

namespace topickit {
namespace {

Corpus plain(std::vector<std::pair<std::string, std::uint64_t>> rows, std::string name = "c") {
  Corpus c;
  c.name = std::move(name);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    c.docs.push_back({std::to_string(i + 1), rows[i].first, rows[i].second, {}});
  }
  return c;
}

const Chunk* find_chunk(const std::vector<Chunk>& chunks, std::string_view text) {
  for (const auto& c : chunks) {
    if (c.text == text) return &c;
  }
  return nullptr;
}

std::vector<std::pair<std::size_t, std::size_t>> spans_of(const Chunk& c) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& s : c.occurrences) out.emplace_back(s.begin, s.end);
  return out;
}

TEST(Decompose, FlatAlternation) {
  const auto chunks = decompose("corona|news");
  ASSERT_EQ(chunks.size(), 2u);
  EXPECT_EQ(chunks[0].text, "corona");
  EXPECT_EQ(chunks[0].kind, ChunkKind::kClause);
  EXPECT_EQ(chunks[1].text, "news");
  EXPECT_EQ(chunks[1].occurrences, (std::vector<ByteSpan>{{7, 11}}));
}

TEST(Decompose, GuardBoxRows) {
  const auto chunks = decompose(R"((\b|\d|_|#)c[o0]vi[dt](\b|\d|_))");
  for (const char* expected : {"c[o0]vi[dt]", "i[dt]", "[o0]", "[dt]", R"((\b|\d|_|#))", R"((\b|\d|_))"}) {
    EXPECT_NE(find_chunk(chunks, expected), nullptr) << expected;
  }
  EXPECT_EQ(find_chunk(chunks, "c[o0]vi[dt]")->kind, ChunkKind::kLiteralWord);
  EXPECT_EQ(find_chunk(chunks, "[o0]")->kind, ChunkKind::kCharClass);
}

TEST(Decompose, RepeatedTextIsOneChunk) {
  const auto chunks = decompose("xyz.a|xyz.b");
  const Chunk* x = find_chunk(chunks, "xyz");
  ASSERT_NE(x, nullptr);
  EXPECT_EQ(x->occurrences, (std::vector<ByteSpan>{{0, 3}, {6, 9}}));
}

TEST(Decompose, GapsAndLookarounds) {
  const auto chunks = decompose(R"(covid.{0,80}?virus|corona(?!(ry|\W{0,3}beer)))");
  const Chunk* gap = find_chunk(chunks, ".{0,80}?");
  ASSERT_NE(gap, nullptr);
  EXPECT_EQ(gap->kind, ChunkKind::kQuantifiedGap);
  EXPECT_FALSE(gap->precision_guarding);
  const Chunk* beer = find_chunk(chunks, "beer");
  ASSERT_NE(beer, nullptr);
  EXPECT_TRUE(beer->precision_guarding);
  EXPECT_FALSE(find_chunk(chunks, "covid")->precision_guarding);
}

TEST(Decompose, InertAlternativesAreExcluded) {
  const auto chunks = decompose("(?!x)x_version_1|(?!x)x\n|(?!x)x_main|(covid)");
  for (const auto& c : chunks) EXPECT_EQ(c.text.find("(?!x)x"), std::string::npos) << c.text;
  EXPECT_NE(find_chunk(chunks, "(covid)"), nullptr);
}

TEST(Decompose, ChunkInvariants) {
  testing::Rng rng(71);
  for (int round = 0; round < 300; ++round) {
    const std::string regex = testing::random_matcher_regex(rng);
    for (const auto& c : decompose(regex)) {
      ASSERT_FALSE(c.occurrences.empty());
      for (std::size_t i = 0; i < c.occurrences.size(); ++i) {
        const auto& s = c.occurrences[i];
        ASSERT_EQ(regex.substr(s.begin, s.end - s.begin), c.text) << regex;
        if (i) ASSERT_LE(c.occurrences[i - 1].end, s.begin);
      }
    }
  }
  EXPECT_THROW(decompose("a|("), Error);
}

TEST(Ablate, SubstitutesEveryOccurrence) {
  const auto chunks = decompose("corona|news");
  EXPECT_EQ(ablate("corona|news", chunks[1]), "corona|foobar123");
  const auto dup = decompose("xyz.a|xyz.b");
  EXPECT_EQ(ablate("xyz.a|xyz.b", *find_chunk(dup, "xyz")), "foobar123.a|foobar123.b");
}

TEST(Ablate, Errors) {
  Chunk wrong{"zz", ChunkKind::kLiteralWord, {{0, 2}}, false};
  EXPECT_THROW(ablate("ab", wrong), Error);
  try {
    ablate("[a]", Chunk{"[b", ChunkKind::kCharClass, {{0, 2}}, false});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
  // "(a)" with the open paren replaced leaves an unbalanced ")".
  try {
    ablate("(a)", Chunk{"(", ChunkKind::kGroup, {{0, 1}}, false});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAblationInvalid);
  }
}

TEST(Ablate, GapKillsBipartiteMatches) {
  const std::string regex = "covid.{0,80}?virus";
  const Corpus c = plain({{"covid virus", 1}, {"covid and the virus", 2}, {"virus", 1}});
  const auto chunks = decompose(regex);
  const Chunk* gap = find_chunk(chunks, ".{0,80}?");
  ASSERT_NE(gap, nullptr);
  const auto recount = testing::ablation_recount(regex, spans_of(*gap), {c});
  EXPECT_EQ(recount.at("c").base, 3u);
  EXPECT_EQ(recount.at("c").lost, 3u);
  const auto report = profile(regex, {c});
  for (const auto& row : report.rows) {
    if (row.chunk.text == ".{0,80}?") EXPECT_EQ(row.loss_pct.at("c"), 100.0);
  }
}

TEST(Profile, LossIsShareOfBaseline) {
  const auto report = profile("corona|covid", {plain({{"corona", 1}, {"covid", 1}, {"covid party", 1}})});
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_EQ(report.rows[0].chunk.text, "covid");
  EXPECT_NEAR(report.rows[0].loss_pct.at("c"), 66.667, 1e-3);
  EXPECT_EQ(report.rows[1].chunk.text, "corona");
  EXPECT_NEAR(report.rows[1].loss_pct.at("c"), 33.333, 1e-3);
  EXPECT_EQ(report.rows[0].max_loss, report.rows[0].loss_pct.at("c"));
  EXPECT_EQ(report.baseline_weight.at("c"), 3u);
}

TEST(Profile, EmptyBaselines) {
  const Corpus hit = plain({{"covid", 1}}, "hit");
  const Corpus miss = plain({{"weather", 1}}, "miss");
  const auto report = profile("covid", {hit, miss});
  EXPECT_EQ(report.corpora, std::vector<std::string>{"hit"});
  EXPECT_EQ(report.skipped_corpora, std::vector<std::string>{"miss"});
  try {
    profile("covid", {miss});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyBaseline);
  }
}

TEST(Profile, WarnsWhenTheLiteralOccurs) {
  const auto report = profile("covid", {plain({{"covid FOOBAR123", 1}})});
  EXPECT_FALSE(report.warnings.empty());
}

TEST(Profile, AgreesWithRecountOracle) {
  testing::Rng rng(72);
  for (int round = 0; round < 60; ++round) {
    const std::string regex = testing::random_matcher_regex(rng);
    std::vector<Corpus> corpora = {testing::random_corpus(rng, 150), testing::random_corpus(rng, 150)};
    corpora[0].name = "posts";
    corpora[1].name = "queries";
    ProfileReport report;
    try {
      report = profile(regex, corpora, 1 + round % 3);
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), ErrorCode::kEmptyBaseline);
      continue;
    }
    const auto chunks = decompose(regex);
    ASSERT_EQ(report.rows.size(), chunks.size());
    for (std::size_t r = 1; r < report.rows.size(); ++r) {
      if (!report.rows[r].skipped && !report.rows[r - 1].skipped) {
        ASSERT_GE(report.rows[r - 1].max_loss, report.rows[r].max_loss);
      }
    }
    for (const auto& row : report.rows) {
      if (row.skipped) continue;
      const auto oracle = testing::ablation_recount(regex, spans_of(row.chunk), corpora);
      double max_loss = 0;
      for (const auto& name : report.corpora) {
        const auto& o = oracle.at(name);
        ASSERT_EQ(row.lost_weight.at(name), o.lost) << regex << " / " << row.chunk.text;
        ASSERT_EQ(row.gained_weight.at(name), o.gained) << regex << " / " << row.chunk.text;
        ASSERT_EQ(row.loss_pct.at(name), static_cast<double>(o.lost) * 100.0 / static_cast<double>(o.base));
        ASSERT_EQ(row.gain_pct.at(name), static_cast<double>(o.gained) * 100.0 / static_cast<double>(o.base));
        ASSERT_LE(row.loss_pct.at(name), 100.0);
        max_loss = std::max(max_loss, row.loss_pct.at(name));
        if (!row.chunk.precision_guarding) ASSERT_EQ(o.gained, 0u) << regex << " / " << row.chunk.text;
      }
      ASSERT_EQ(row.max_loss, max_loss);
    }
  }
}

TEST(RemoveClause, DropsOneSeparator) {
  const auto chunks = decompose("aaa|bbb|ccc");
  EXPECT_EQ(remove_clause("aaa|bbb|ccc", chunks[0]), "bbb|ccc");
  EXPECT_EQ(remove_clause("aaa|bbb|ccc", chunks[1]), "aaa|ccc");
  EXPECT_EQ(remove_clause("aaa|bbb|ccc", chunks[2]), "aaa|bbb");
}

TEST(Distill, ZeroBudgetKeepsTheRegex) {
  const Corpus c = plain({{"covid", 1}, {"corona", 1}});
  const auto r = distill("covid|corona|zzz", c, 0.0);
  EXPECT_TRUE(r.suggested_removals.empty());
  EXPECT_EQ(r.final_regex, "covid|corona|zzz");
  EXPECT_EQ(r.final_loss_pct, 0.0);
  EXPECT_THROW(distill("covid", c, -1.0), Error);
}

TEST(Distill, DuplicatedChunkTrap) {
  const Corpus c = plain({{"covid news", 5}, {"c0vid", 1}, {"weather", 3}});
  for (double budget : {0.5, 5.0, 20.0, 50.0, 99.0}) {
    const auto r = distill("covid|c[o0]vid", c, budget);
    EXPECT_LT(r.final_loss_pct, budget);
    EXPECT_TRUE(compile(r.final_regex).matches("covid")) << budget << " -> " << r.final_regex;
  }
}

// Greedy removal over clauses by brute-force rematch.
std::vector<std::string> greedy_clause_oracle(std::vector<std::string> clauses, const Corpus& c,
                                              double budget) {
  auto join = [](const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : "|") + p;
    return out;
  };
  const auto base = testing::matched_by(join(clauses), c);
  const std::uint64_t base_w = testing::weight_of(c, base, base, true, true);
  std::vector<std::string> removed;
  while (clauses.size() > 1) {
    std::size_t best = clauses.size();
    double best_loss = 0;
    for (std::size_t i = 0; i < clauses.size(); ++i) {
      auto rest = clauses;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      const auto after = testing::matched_by(join(rest), c);
      const double loss = static_cast<double>(testing::weight_of(c, base, after, true, false)) * 100.0 /
                          static_cast<double>(base_w);
      if (best == clauses.size() || loss < best_loss) {
        best = i;
        best_loss = loss;
      }
    }
    if (!(best_loss < budget)) break;
    removed.push_back(clauses[best]);
    clauses.erase(clauses.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return removed;
}

TEST(Distill, FollowsBruteForceGreedyOrder) {
  std::vector<std::pair<std::string, std::uint64_t>> rows;
  const std::vector<std::string> words = {"ddd", "bbb", "eee", "aaa", "ccc"};
  const std::vector<std::uint64_t> weights = {4, 2, 5, 1, 3};
  for (std::size_t i = 0; i < words.size(); ++i) rows.push_back({"post " + words[i], weights[i]});
  rows.push_back({"other", 7});
  const Corpus c = plain(rows);
  for (double budget : {5.0, 10.0, 25.0, 45.0, 70.0, 100.0}) {
    const auto r = distill("aaa|bbb|ccc|ddd|eee", c, budget);
    std::vector<std::string> got;
    for (const auto& chunk : r.suggested_removals) got.push_back(chunk.text);
    EXPECT_EQ(got, greedy_clause_oracle({"aaa", "bbb", "ccc", "ddd", "eee"}, c, budget)) << budget;
  }
}

TEST(Distill, FinalLossStaysWithinBudget) {
  testing::Rng rng(73);
  for (int round = 0; round < 25; ++round) {
    const std::string regex = testing::random_matcher_regex(rng);
    const Corpus c = testing::random_corpus(rng, 120);
    const double budget = static_cast<double>(rng() % 40);
    DistillResult r;
    try {
      r = distill(regex, c, budget);
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), ErrorCode::kEmptyBaseline);
      continue;
    }
    const auto base = testing::matched_by(regex, c);
    const auto after = testing::matched_by(r.final_regex, c);
    const double loss = static_cast<double>(testing::weight_of(c, base, after, true, false)) * 100.0 /
                        static_cast<double>(testing::weight_of(c, base, base, true, true));
    ASSERT_EQ(r.final_loss_pct, loss);
    ASSERT_LE(loss, budget) << regex;
    for (const auto& chunk : r.suggested_removals) ASSERT_FALSE(chunk.precision_guarding);
  }
}

}  // namespace
}  // namespace topickit
