#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "topickit/cli.hpp"

namespace topickit {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

constexpr const char* kDoc = R"json({
  "topic": "covid19",
  "language": "en",
  "tier": "tier2",
  "version": 1,
  "sections": [
    {"label": "main", "clauses": [
      {"kind": "keyword", "core": "c[o0]vid", "prefix_guard": "", "suffix_guard": ""},
      {"kind": "literal", "pattern": "corona(?!(ry|\\W{0,3}beer))"}]},
    {"label": "pairs", "clauses": [
      {"kind": "bipartite", "set_a": ["sars"], "set_b": ["virus", "flu"], "max_gap": 10}]}
  ],
  "tests": {"must_match": ["Covid news"], "must_not_match": ["coronary artery"]}
})json";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("topickit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write("doc.json", kDoc);
    write("v1.regex", "covid|corona(?!ry)\n");
    write("v2.regex", "c[o0]vid|corona|sars.{0,10}?virus\n");
    write("safe.regex", "covid\n");
    write("posts.tsv",
          "covid news today\t3\t1\ncorona beer party\t2\t0\nc0vid and sars virus\t1\t1\n"
          "coronary artery news\t1\t0\nweather today\t5\t0\ncorona spreads\t2\t1\n"
          "sars  virus\t1\t1\ncovid covid corona\t1\t1\n");
    write("queries.txt", "covid\ncorona cases\nflu shot\nsars virus news\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  void write(const std::string& name, const std::string& bytes) { std::ofstream(dir_ / name) << bytes; }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, ValidateCleanDocument) {
  const auto r = run({"validate", "--doc", path("doc.json")});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.out, "");
}

TEST_F(CliTest, ValidateReportsFindingsAsJsonLines) {
  write("bad.regex", "a\\b||c\n");
  const auto r = run({"validate", "--stored", path("bad.regex")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find(R"("code":"ODD_BACKSLASH")"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find(R"("code":"EMPTY_ALTERNATIVE")"), std::string::npos) << r.out;
  EXPECT_EQ(r.out.back(), '\n');
}

TEST_F(CliTest, RenderForms) {
  const auto compact = run({"render", "--doc", path("doc.json")});
  ASSERT_EQ(compact.code, 0) << compact.err;
  EXPECT_EQ(compact.out.find("(?!x)x"), std::string::npos);
  const auto annotated = run({"render", "--doc", path("doc.json"), "--annotated", "--width", "40"});
  ASSERT_EQ(annotated.code, 0) << annotated.err;
  EXPECT_EQ(annotated.out.rfind(R"({"regex":"(?!x)x_version_1|)", 0), 0u) << annotated.out;
  EXPECT_NE(annotated.out.find("(?!x)x_pairs"), std::string::npos);
  const auto live = run({"render", "--doc", path("doc.json"), "--format", "tsv"});
  EXPECT_NE(live.out.find("|\\W{0,3}"), std::string::npos) << live.out;
  const auto stored = run({"render", "--doc", path("doc.json"), "--stored", "--format", "tsv"});
  EXPECT_NE(stored.out.find("|\\\\W{0,3}"), std::string::npos) << stored.out;
}

TEST_F(CliTest, MatchEmitsOneLinePerDocument) {
  const auto r = run({"match", "--regex", path("v1.regex"), "--corpus", path("queries.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "{\"doc_id\":\"1\",\"matched\":true,\"vetoed\":false,\"snippets\":[\"covid\"]}\n"
            "{\"doc_id\":\"2\",\"matched\":true,\"vetoed\":false,\"snippets\":[\"corona\"]}\n"
            "{\"doc_id\":\"3\",\"matched\":false,\"vetoed\":false,\"snippets\":[]}\n"
            "{\"doc_id\":\"4\",\"matched\":false,\"vetoed\":false,\"snippets\":[]}\n");
}

TEST_F(CliTest, MatchReviewBundle) {
  const auto r = run({"match", "--regex", path("v1.regex"), "--corpus", path("queries.txt"), "--review",
                      path("review.tsv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path("review.tsv"));
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "id\ttext\tsnippets\n1\tcovid\t[\"covid\"]\n2\tcorona cases\t[\"corona\"]\n");
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"match", "--regex", path("v1.regex"), "--corpus", path("queries.txt"), "--bogus"}).code, 2);
  EXPECT_EQ(run({"match", "--regex", path("v1.regex")}).code, 2);
  EXPECT_EQ(run({"match", "--regex", path("v1.regex"), "--corpus", path("queries.txt"), "--format", "xml"}).code,
            2);
  const auto missing = run({"match", "--regex", path("nope.regex"), "--corpus", path("queries.txt")});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("IO_ERROR"), std::string::npos) << missing.err;
}

TEST_F(CliTest, HelpListsFileFormats) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("File formats"), std::string::npos);
  for (const char* sub : {"validate", "render", "match", "diff", "discover", "eval", "bench", "profile", "distill",
                          "publish", "fetch", "list", "concat"}) {
    EXPECT_NE(r.out.find(sub), std::string::npos) << sub;
    const auto h = run({sub, "--help"});
    EXPECT_EQ(h.code, 0) << sub;
    EXPECT_NE(h.out.find("File formats"), std::string::npos) << sub;
  }
}

TEST_F(CliTest, OutputIsIdenticalAcrossJobCounts) {
  const std::vector<std::vector<std::string>> invocations = {
      {"match", "--regex", path("v2.regex"), "--corpus", path("posts.tsv")},
      {"diff", "--old", path("v1.regex"), "--new", path("v2.regex"), "--corpus", path("posts.tsv")},
      {"discover", "words", "--corpus", path("posts.tsv")},
      {"discover", "words", "--corpus", path("posts.tsv"), "--regex", path("v2.regex")},
      {"discover", "cooccur", "--corpus", path("posts.tsv"), "--regex", path("v2.regex")},
      {"discover", "ratio", "--corpus", path("posts.tsv"), "--background", path("queries.txt")},
      {"discover", "ngrams", "--corpus", path("posts.tsv"), "--n", "3"},
      {"discover", "diff", "--old", path("v1.regex"), "--new", path("v2.regex"), "--corpus", path("posts.tsv")},
      {"eval", "confusion", "--regex", path("v2.regex"), "--corpus", path("posts.tsv")},
      {"eval", "safe", "--regex", path("v2.regex"), "--safe", path("safe.regex"), "--corpus", path("posts.tsv")},
      {"eval", "gain", "--base", path("v1.regex"), "--improved", path("v2.regex"), "--corpus", path("posts.tsv")},
      {"eval", "sample", "--a", path("v1.regex"), "--b", path("v2.regex"), "--corpus", path("posts.tsv")},
      {"profile", "--regex", path("v2.regex"), "--corpus", path("posts.tsv"), "--corpus", path("queries.txt")},
      {"distill", "--regex", path("v2.regex"), "--corpus", path("posts.tsv"), "--budget", "20"},
  };
  for (auto args : invocations) {
    for (const char* format : {"json", "tsv"}) {
      auto one = args;
      one.insert(one.end(), {"--format", format, "--jobs", "1"});
      auto many = args;
      many.insert(many.end(), {"--format", format, "--jobs", "8"});
      const auto a = run(one);
      const auto b = run(many);
      ASSERT_EQ(a.code, 0) << args[0] << " " << args[1] << "\n" << a.err;
      ASSERT_FALSE(a.out.empty()) << args[0] << " " << args[1];
      ASSERT_EQ(a.out, b.out) << args[0] << " " << args[1];
    }
  }
}

TEST_F(CliTest, ProfileTsvHasOneColumnPerCorpus) {
  const auto r = run({"profile", "--regex", path("v2.regex"), "--corpus", path("posts.tsv"), "--corpus",
                      path("queries.txt"), "--format", "tsv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  EXPECT_NE(header.find("posts"), std::string::npos) << header;
  EXPECT_NE(header.find("queries"), std::string::npos) << header;
}

TEST_F(CliTest, RegistryRoundTrip) {
  const std::string reg = path("registry.json");
  auto r = run({"publish", "--doc", path("doc.json"), "--registry", reg});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "{\"version\":1}\n");
  r = run({"publish", "--doc", path("doc.json"), "--registry", reg});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("VERSION_CONFLICT"), std::string::npos);

  write("cs.regex", "koronavir\n");
  r = run({"publish", "--stored", path("cs.regex"), "--topic", "covid19", "--language", "cs", "--tier", "tier2",
           "--version", "1", "--registry", reg});
  ASSERT_EQ(r.code, 0) << r.err;

  r = run({"fetch", "--topic", "covid19", "--language", "en", "--tier", "tier2", "--registry", reg});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"version\":1"), std::string::npos);
  EXPECT_NE(r.out.find("(?!x)x_version_1"), std::string::npos);

  r = run({"fetch", "--topic", "covid19", "--language", "de", "--tier", "tier2", "--registry", reg});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("NOT_FOUND"), std::string::npos);

  r = run({"list", "--registry", reg, "--format", "tsv"});
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);

  r = run({"concat", "--topic", "covid19", "--tier", "tier2", "--language", "cs", "--language", "en",
           "--registry", reg});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("{\"regex\":\"(koronavir)|(", 0), 0u) << r.out;

  r = run({"concat", "--topic", "covid19", "--tier", "tier2", "--language", "cs", "--language", "en", "--max", "1",
           "--registry", reg});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("TOO_MANY_LANGS"), std::string::npos);
}

TEST_F(CliTest, BenchReportsBuckets) {
  const auto r = run({"bench", "--regex", path("v2.regex"), "--texts", path("queries.txt"), "--reps", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"text_chars\":1000"), std::string::npos) << r.out;
  EXPECT_EQ(run({"bench", "--regex", path("v2.regex"), "--texts", path("queries.txt"), "--reps", "2"}).code, 2);
}

}  // namespace
}  // namespace topickit
