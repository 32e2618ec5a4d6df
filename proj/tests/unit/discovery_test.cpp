#include <gtest/gtest.h>

#include <algorithm>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "topickit/discovery.hpp"
#include "topickit/error.hpp"

namespace topickit {
namespace {

Corpus make_corpus(std::vector<std::pair<std::string, std::uint64_t>> rows, std::string name = "c") {
  Corpus c;
  c.name = std::move(name);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    c.docs.push_back({std::to_string(i + 1), rows[i].first, rows[i].second, std::nullopt});
  }
  return c;
}

// Every document repeated `weight` times at weight 1.
Corpus expand_weights(const Corpus& c) {
  Corpus out;
  out.name = c.name;
  for (const auto& d : c.docs) {
    for (std::uint64_t w = 0; w < d.weight; ++w) {
      out.docs.push_back({d.id + "." + std::to_string(w), d.text, 1, d.label});
    }
  }
  return out;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(TopWords, WeightedDocumentFrequency) {
  const Corpus c = make_corpus({{"covid news", 1}, {"Covid covid", 2}, {"flu news", 1}});
  EXPECT_EQ(top_words(c, nullptr, 10), (Ranking{{"covid", 3}, {"news", 2}, {"flu", 1}}));
  EXPECT_EQ(top_words(c, nullptr, 1), (Ranking{{"covid", 3}}));
  const auto filter = compile("covid");
  EXPECT_EQ(top_words(c, &filter, 10), (Ranking{{"covid", 3}, {"news", 1}}));
}

TEST(TopWords, Errors) {
  const Corpus c = make_corpus({{"a", 1}});
  const auto none = compile("zzz");
  EXPECT_EQ(code_of([&] { top_words(c, &none, 5); }), ErrorCode::kEmptySelection);
  EXPECT_EQ(code_of([&] { top_words(c, nullptr, 0); }), ErrorCode::kInvalidArgument);
}

TEST(TopWords, AgreesWithNaiveDocumentFrequency) {
  testing::Rng rng(51);
  for (int round = 0; round < 40; ++round) {
    const Corpus c = testing::random_corpus(rng, 60);
    const std::string regex = testing::random_matcher_regex(rng);
    const auto m = compile(regex);
    const auto selected = testing::matched_by(regex, c);
    const auto df = testing::ascii_doc_frequency(c, selected);
    if (df.empty()) continue;
    auto expected = Ranking(df.begin(), df.end());
    std::stable_sort(expected.begin(), expected.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    ASSERT_EQ(top_words(c, &m, 100000), expected) << regex;
  }
}

TEST(TopWords, WeightEqualsDuplication) {
  testing::Rng rng(52);
  for (int round = 0; round < 20; ++round) {
    const Corpus c = testing::random_corpus(rng, 40);
    ASSERT_EQ(top_words(c, nullptr, 50), top_words(expand_weights(c), nullptr, 50));
    ASSERT_EQ(top_ngrams(c, 2, nullptr, 50), top_ngrams(expand_weights(c), 2, nullptr, 50));
  }
}

TEST(Cooccurring, WindowAroundEachOccurrence) {
  const Corpus c = make_corpus({{"a b covid c d e", 1}});
  const auto seed = compile("covid");
  EXPECT_EQ(cooccurring_words(c, seed, 2, 10), (Ranking{{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}}));
  EXPECT_EQ(cooccurring_words(c, seed, 1, 10), (Ranking{{"b", 1}, {"c", 1}}));
}

TEST(Cooccurring, CountsPerOccurrenceTimesWeight) {
  const Corpus c = make_corpus({{"covid x covid", 3}, {"nothing here", 5}});
  EXPECT_EQ(cooccurring_words(c, compile("covid"), 1, 10), (Ranking{{"x", 6}}));
}

TEST(Cooccurring, NoMatchIsEmptySelection) {
  const Corpus c = make_corpus({{"a b", 1}});
  EXPECT_EQ(code_of([&] { cooccurring_words(c, compile("zzz"), 2, 10); }), ErrorCode::kEmptySelection);
  EXPECT_EQ(code_of([&] { cooccurring_words(c, compile("a"), 0, 10); }), ErrorCode::kInvalidArgument);
}

TEST(RatioRanking, SmoothedFrequencyRatio) {
  const Corpus target = make_corpus({{"covid news", 1}, {"covid", 1}}, "t");
  const Corpus background = make_corpus({{"news", 1}, {"weather", 1}}, "b");
  const auto r = ratio_ranked_words(target, background, 10);
  ASSERT_EQ(r.size(), 3u);
  // covid: (3/3)/(1/3); news: (2/3)/(2/3); weather: (1/3)/(2/3).
  EXPECT_EQ(r[0].token, "covid");
  EXPECT_DOUBLE_EQ(r[0].ratio, 3.0);
  EXPECT_EQ(r[0].target_df, 2u);
  EXPECT_EQ(r[0].background_df, 0u);
  EXPECT_EQ(r[1].token, "news");
  EXPECT_DOUBLE_EQ(r[1].ratio, 1.0);
  EXPECT_EQ(r[2].token, "weather");
  EXPECT_DOUBLE_EQ(r[2].ratio, 0.5);
}

TEST(RatioRanking, ExactTiesKeepTokenOrder) {
  const Corpus target = make_corpus({{"b a", 1}}, "t");
  const Corpus background = make_corpus({{"c", 1}}, "b");
  const auto r = ratio_ranked_words(target, background, 10);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0].token, "a");
  EXPECT_EQ(r[1].token, "b");
  EXPECT_EQ(r[2].token, "c");
}

TEST(RatioRanking, OrderIsNonIncreasingAndDuplicationInvariant) {
  testing::Rng rng(53);
  for (int round = 0; round < 20; ++round) {
    const Corpus t = testing::random_corpus(rng, 30);
    const Corpus b = testing::random_corpus(rng, 30);
    const auto r = ratio_ranked_words(t, b, 1000);
    for (std::size_t i = 1; i < r.size(); ++i) ASSERT_GE(r[i - 1].ratio, r[i].ratio);
    ASSERT_EQ(r, ratio_ranked_words(expand_weights(t), expand_weights(b), 1000));
  }
}

TEST(Ngrams, CountedOncePerDocument) {
  const Corpus c = make_corpus({{"a b c", 1}, {"a b a b", 1}});
  EXPECT_EQ(top_ngrams(c, 2, nullptr, 10), (Ranking{{"a b", 2}, {"b a", 1}, {"b c", 1}}));
  EXPECT_EQ(top_ngrams(c, 3, nullptr, 10), (Ranking{{"a b a", 1}, {"a b c", 1}, {"b a b", 1}}));
  EXPECT_EQ(code_of([&] { top_ngrams(c, 4, nullptr, 10); }), ErrorCode::kInvalidArgument);
}

TEST(DiffMatches, NewAndLostAggregateByText) {
  const Corpus c = make_corpus({{"flu news", 2}, {"covid", 1}, {"flu news", 1}, {"weather", 4}});
  const auto old = compile("covid");
  const auto updated = compile("covid|flu");
  const DiffReport forward = diff_matches(old, updated, c, 10);
  EXPECT_EQ(forward.new_total, 3u);
  EXPECT_EQ(forward.lost_total, 0u);
  EXPECT_EQ(forward.new_top, (Ranking{{"flu news", 3}}));
  const DiffReport backward = diff_matches(updated, old, c, 10);
  EXPECT_EQ(backward.lost_total, 3u);
  EXPECT_EQ(backward.lost_top, forward.new_top);
}

TEST(DiffMatches, SwappingArgumentsSwapsSides) {
  testing::Rng rng(54);
  for (int round = 0; round < 30; ++round) {
    const Corpus c = testing::random_corpus(rng, 80);
    const auto a = compile(testing::random_matcher_regex(rng));
    const auto b = compile(testing::random_matcher_regex(rng));
    const DiffReport ab = diff_matches(a, b, c, 20);
    const DiffReport ba = diff_matches(b, a, c, 20);
    ASSERT_EQ(ab.new_total, ba.lost_total);
    ASSERT_EQ(ab.lost_total, ba.new_total);
    ASSERT_EQ(ab.new_top, ba.lost_top);
    ASSERT_EQ(ab.lost_top, ba.new_top);
  }
}

TEST(Discovery, JobsDoNotChangeResults) {
  testing::Rng rng(55);
  const Corpus c = testing::random_corpus(rng, 300);
  const auto seed = compile("a|b");
  EXPECT_EQ(top_words(c, nullptr, 30, 1), top_words(c, nullptr, 30, 8));
  EXPECT_EQ(cooccurring_words(c, seed, 2, 30, 1), cooccurring_words(c, seed, 2, 30, 8));
  EXPECT_EQ(top_ngrams(c, 3, &seed, 30, 1), top_ngrams(c, 3, &seed, 30, 8));
}

}  // namespace
}  // namespace topickit
