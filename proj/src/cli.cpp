#include "topickit/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "topickit/corpus.hpp"
#include "topickit/discovery.hpp"
#include "topickit/document.hpp"
#include "topickit/error.hpp"
#include "topickit/evaluator.hpp"
#include "topickit/matcher.hpp"
#include "topickit/profiler.hpp"
#include "topickit/registry.hpp"
#include "topickit/render.hpp"
#include "topickit/scan.hpp"
#include "topickit/validator.hpp"

namespace topickit::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr const char* kFormatsHelp = R"(File formats:
  document  JSON {topic, language, tier: "tier1"|"tier2", version, sections:
            [{label, clauses: [{kind: "literal", pattern} | {kind: "keyword",
            core, prefix_guard?, suffix_guard?, exclusions?} | {kind:
            "bipartite", set_a, set_b, max_gap?, ordered_both_ways?}]}],
            tests?: {must_match, must_not_match}}; fragments use single
            backslashes.
  regex     A *.json path is read as a document and rendered compactly; any
            other path holds a stored regex (backslashes doubled), one
            trailing newline ignored.
  corpus    *.tsv: text[\tweight[\tlabel]] per line, label 1, 0 or -;
            anything else: one document per line. Blank lines are skipped;
            document ids are line numbers.
  custom    JSON {first_k_lines?, first_k_words?, strip_patterns?,
            negative_regexes?, discount_snippet_patterns?, snippet_cap?}.
  banlist   JSON [{name, pattern}].
  registry  JSON {entries: [...]}; path from --registry, $TOPICKIT_REGISTRY
            or ./registry.json.)";

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIoError:
    case ErrorCode::kMalformedDocument:
    case ErrorCode::kMalformedRow:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kOddBackslash:
    case ErrorCode::kCompileFail:
    case ErrorCode::kInvariantViolation:
    case ErrorCode::kRenderInvalid:
    case ErrorCode::kLabelCharset:
    case ErrorCode::kUnboundedFragment:
      return 2;
    default:
      return 1;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read file", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << bytes)) throw Error(ErrorCode::kIoError, "cannot write file", path);
}

std::string strip_one_newline(std::string s) {
  if (!s.empty() && s.back() == '\n') s.pop_back();
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

std::string load_live_regex(const std::string& path) {
  const std::string bytes = read_file(path);
  if (fs::path(path).extension() == ".json") return render_compact(parse_document(bytes));
  return unescape_from_store(strip_one_newline(bytes));
}

std::string dump(const ordered_json& j) {
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

// TSV cells never contain tabs or newlines.
std::string cell(std::string s) {
  for (char& c : s) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

std::string number(double v) { return fmt::format("{:.6f}", v); }

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json ranking_json(const Ranking& r, const char* key) {
  ordered_json arr = ordered_json::array();
  for (const auto& [k, w] : r) arr.push_back({{key, k}, {"weight", w}});
  return arr;
}

struct Common {
  std::string format = "json";
  int jobs = 0;
  bool tsv() const { return format == "tsv"; }
};

class App {
 public:
  App(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args) {
    CLI::App app{"Build, check, evaluate and distribute topic regexes", "topickit"};
    app.footer(kFormatsHelp);
    app.require_subcommand(1, 1);
    app.option_defaults()->always_capture_default();
    setup(app);

    std::vector<const char*> argv{"topickit"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Error& e) {
      const int code = app.exit(e, out_, err_);
      return code == 0 ? 0 : 2;
    } catch (const Error& e) {
      ordered_json j{{"error", to_string(e.code())}, {"location", e.location()},
                     {"message", e.what()}};
      err_ << dump(j) << "\n";
      return exit_code_for(e.code());
    } catch (const std::exception& e) {
      err_ << dump(ordered_json{{"error", "INTERNAL"}, {"message", e.what()}}) << "\n";
      return 2;
    }
    return status_;
  }

 private:
  CLI::App* add(CLI::App& parent, const std::string& name, const std::string& help) {
    CLI::App* sub = parent.add_subcommand(name, help);
    sub->footer(kFormatsHelp);
    return sub;
  }

  void common(CLI::App* sub) {
    sub->add_option("--format", c_.format, "Output format")->check(CLI::IsMember({"json", "tsv"}));
    sub->add_option("--jobs", c_.jobs, "Worker threads for corpus scans (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
  }

  void setup(CLI::App& app) {
    setup_validate(app);
    setup_render(app);
    setup_match(app);
    setup_diff(app);
    setup_discover(app);
    setup_eval(app);
    setup_bench(app);
    setup_profile(app);
    setup_distill(app);
    setup_registry(app);
  }

  // validate ---------------------------------------------------------------

  void setup_validate(CLI::App& app) {
    auto* sub = add(app, "validate", "Lint a document or stored regex; exit 1 on ERROR findings");
    common(sub);
    auto* doc = sub->add_option("--doc", s1_, "Document JSON");
    auto* stored = sub->add_option("--stored", s2_, "Stored-form regex file");
    doc->excludes(stored);
    sub->add_option("--banlist", s3_, "Banned-syntax rules JSON (default: built-in list)");
    sub->callback([this, doc, stored] {
      if (!*doc && !*stored) throw CLI::RequiredError("--doc or --stored");
      const auto banlist = s3_.empty() ? default_banlist() : parse_banlist(read_file(s3_));
      const auto findings = *doc ? validate_document(parse_document(read_file(s1_)), banlist)
                                 : validate_stored(strip_one_newline(read_file(s2_)), banlist);
      for (const auto& f : findings) {
        if (c_.tsv()) {
          const std::string loc = f.offset ? std::to_string(*f.offset) : f.test;
          out_ << to_string(f.severity) << '\t' << to_string(f.code) << '\t' << loc << '\t'
               << cell(f.message) << '\n';
        } else {
          out_ << to_json_line(f) << '\n';
        }
      }
      status_ = has_errors(findings) ? 1 : 0;
    });
  }

  // render -----------------------------------------------------------------

  void setup_render(CLI::App& app) {
    auto* sub = add(app, "render", "Render a document to a regex");
    common(sub);
    sub->add_option("--doc", s1_, "Document JSON")->required();
    sub->add_flag("--annotated", b1_, "Inert section labels and line breaks");
    sub->add_option("--width", width_, "Line width for --annotated")->default_val(100);
    sub->add_flag("--stored", b2_, "Emit the stored (doubled backslash) form");
    sub->callback([this] {
      const auto doc = parse_document(read_file(s1_));
      RenderOptions opts;
      opts.annotated = b1_;
      opts.max_line_width = width_;
      std::string regex = render(doc, opts);
      if (b2_) regex = escape_for_store(regex);
      if (c_.tsv()) {
        out_ << regex << '\n';
      } else {
        out_ << dump(ordered_json{{"regex", regex}, {"fingerprint", fingerprint_of(render_compact(doc))}})
             << '\n';
      }
    });
  }

  // match ------------------------------------------------------------------

  CompiledTopicMatcher matcher_from(const std::string& path, const std::string& custom = {}) {
    Customization c;
    if (!custom.empty()) c = parse_customization(read_file(custom));
    return CompiledTopicMatcher::compile(load_live_regex(path), c);
  }

  static std::string snippets_json(const std::vector<std::string>& snippets) {
    return dump(ordered_json(snippets));
  }

  void write_review(const std::string& path, const std::vector<ResidualDoc>& rows) {
    std::string bytes = "id\ttext\tsnippets\n";
    for (const auto& r : rows) {
      bytes += cell(r.id) + '\t' + cell(r.text) + '\t' + snippets_json(r.snippets) + '\n';
    }
    write_file(path, bytes);
  }

  void setup_match(CLI::App& app) {
    auto* sub = add(app, "match", "Classify every corpus document with explanations");
    common(sub);
    sub->add_option("--regex", s1_, "Regex file")->required();
    sub->add_option("--corpus", s2_, "Corpus file")->required();
    sub->add_option("--custom", s3_, "Customization JSON");
    sub->add_option("--review", s4_, "Write matched documents as an id/text/snippets TSV");
    sub->callback([this] {
      const auto m = matcher_from(s1_, s3_);
      const Corpus corpus = ingest(s2_);
      std::vector<MatchReport> reports(corpus.docs.size());
      scan::for_each_index(corpus.docs.size(), c_.jobs,
                           [&](std::size_t i) { reports[i] = m.classify(corpus.docs[i].text); });
      std::vector<ResidualDoc> review;
      for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& d = corpus.docs[i];
        const auto& r = reports[i];
        if (c_.tsv()) {
          out_ << d.id << '\t' << (r.matched ? 1 : 0) << '\t' << (r.vetoed ? 1 : 0) << '\t'
               << snippets_json(r.snippets) << '\n';
        } else {
          out_ << dump(ordered_json{{"doc_id", d.id},
                                    {"matched", r.matched},
                                    {"vetoed", r.vetoed},
                                    {"snippets", r.snippets}})
               << '\n';
        }
        if (r.matched) review.push_back(ResidualDoc{d.id, d.text, r.snippets});
      }
      if (!s4_.empty()) write_review(s4_, review);
    });
  }

  // diff / discover --------------------------------------------------------

  void print_ranking(const Ranking& r, const char* key) {
    for (const auto& [k, w] : r) {
      if (c_.tsv()) {
        out_ << cell(k) << '\t' << w << '\n';
      } else {
        out_ << dump(ordered_json{{key, k}, {"weight", w}}) << '\n';
      }
    }
  }

  void print_diff(const DiffReport& r) {
    if (c_.tsv()) {
      out_ << "total\tnew\t" << r.new_total << '\n' << "total\tlost\t" << r.lost_total << '\n';
      for (const auto& [t, w] : r.new_top) out_ << "new\t" << cell(t) << '\t' << w << '\n';
      for (const auto& [t, w] : r.lost_top) out_ << "lost\t" << cell(t) << '\t' << w << '\n';
      return;
    }
    out_ << dump(ordered_json{{"new_total", r.new_total},
                              {"lost_total", r.lost_total},
                              {"new_top", ranking_json(r.new_top, "text")},
                              {"lost_top", ranking_json(r.lost_top, "text")}})
         << '\n';
  }

  void add_diff_options(CLI::App* sub) {
    common(sub);
    sub->add_option("--old", s1_, "Current regex file")->required();
    sub->add_option("--new", s2_, "Candidate regex file")->required();
    sub->add_option("--corpus", s3_, "Corpus file")->required();
    sub->add_option("--top-k", k_diff_, "Rows per list")->default_val(10)->check(CLI::PositiveNumber);
    sub->callback([this] {
      const auto old_m = matcher_from(s1_);
      const auto new_m = matcher_from(s2_);
      print_diff(diff_matches(old_m, new_m, ingest(s3_), k_diff_, c_.jobs));
    });
  }

  void setup_diff(CLI::App& app) {
    add_diff_options(add(app, "diff", "New and lost matches of a candidate regex"));
  }

  void setup_discover(CLI::App& app) {
    auto* discover = add(app, "discover", "Keyword discovery over corpora");
    discover->require_subcommand(1, 1);

    auto* words = add(*discover, "words", "Most frequent words in (matching) documents");
    common(words);
    words->add_option("--corpus", s1_, "Corpus file")->required();
    words->add_option("--regex", s2_, "Only documents this regex matches");
    words->add_option("--top-k", k_words_, "Rows")->default_val(50)->check(CLI::PositiveNumber);
    words->callback([this] {
      const Corpus corpus = ingest(s1_);
      std::optional<CompiledTopicMatcher> filter;
      if (!s2_.empty()) filter = matcher_from(s2_);
      print_ranking(top_words(corpus, filter ? &*filter : nullptr, k_words_, c_.jobs), "token");
    });

    auto* cooccur = add(*discover, "cooccur", "Words next to matches of a seed regex");
    common(cooccur);
    cooccur->add_option("--corpus", s1_, "Corpus file")->required();
    cooccur->add_option("--regex", s2_, "Seed regex file")->required();
    cooccur->add_option("--window", window_, "Tokens on each side")->default_val(2)->check(CLI::PositiveNumber);
    cooccur->add_option("--top-k", k_cooccur_, "Rows")->default_val(50)->check(CLI::PositiveNumber);
    cooccur->callback([this] {
      print_ranking(cooccurring_words(ingest(s1_), matcher_from(s2_), window_, k_cooccur_, c_.jobs), "token");
    });

    auto* ratio = add(*discover, "ratio", "Words over-represented in a target corpus");
    common(ratio);
    ratio->add_option("--corpus", s1_, "Target corpus file")->required();
    ratio->add_option("--background", s2_, "Background corpus file")->required();
    ratio->add_option("--top-k", k_ratio_, "Rows")->default_val(50)->check(CLI::PositiveNumber);
    ratio->callback([this] {
      for (const auto& e : ratio_ranked_words(ingest(s1_), ingest(s2_), k_ratio_, c_.jobs)) {
        if (c_.tsv()) {
          out_ << cell(e.token) << '\t' << number(e.ratio) << '\t' << e.target_df << '\t'
               << e.background_df << '\n';
        } else {
          out_ << dump(ordered_json{{"token", e.token},
                                    {"ratio", e.ratio},
                                    {"target_df", e.target_df},
                                    {"background_df", e.background_df}})
               << '\n';
        }
      }
    });

    auto* ngrams = add(*discover, "ngrams", "Most frequent word bigrams or trigrams");
    common(ngrams);
    ngrams->add_option("--corpus", s1_, "Corpus file")->required();
    ngrams->add_option("--regex", s2_, "Only documents this regex matches");
    ngrams->add_option("--n", n_, "2 or 3")->default_val(2)->check(CLI::IsMember({2, 3}));
    ngrams->add_option("--top-k", k_ngrams_, "Rows")->default_val(50)->check(CLI::PositiveNumber);
    ngrams->callback([this] {
      const Corpus corpus = ingest(s1_);
      std::optional<CompiledTopicMatcher> filter;
      if (!s2_.empty()) filter = matcher_from(s2_);
      print_ranking(top_ngrams(corpus, n_, filter ? &*filter : nullptr, k_ngrams_, c_.jobs), "ngram");
    });

    add_diff_options(add(*discover, "diff", "New and lost matches of a candidate regex"));
  }

  // eval -------------------------------------------------------------------

  void setup_eval(CLI::App& app) {
    auto* eval = add(app, "eval", "Quantitative evaluation");
    eval->require_subcommand(1, 1);

    auto* confusion = add(*eval, "confusion", "Weighted confusion metrics on a labeled corpus");
    common(confusion);
    confusion->add_option("--regex", s1_, "Regex file")->required();
    confusion->add_option("--corpus", s2_, "Labeled TSV corpus")->required();
    confusion->callback([this] {
      const auto r = confusion_eval(matcher_from(s1_), ingest(s2_), c_.jobs);
      if (c_.tsv()) {
        auto opt = [](const std::optional<double>& v) { return v ? number(*v) : std::string("-"); };
        out_ << "tp\t" << r.tp << "\nfp\t" << r.fp << "\nfn\t" << r.fn << "\ntn\t" << r.tn
             << "\naccuracy\t" << opt(r.accuracy) << "\nprecision\t" << opt(r.precision)
             << "\nrecall\t" << opt(r.recall) << '\n';
      } else {
        out_ << dump(ordered_json{{"tp", r.tp},
                                  {"fp", r.fp},
                                  {"fn", r.fn},
                                  {"tn", r.tn},
                                  {"accuracy", optional_number(r.accuracy)},
                                  {"precision", optional_number(r.precision)},
                                  {"recall", optional_number(r.recall)}})
             << '\n';
      }
    });

    auto* safe = add(*eval, "safe", "Share of matches auto-confirmed by a safe regex");
    common(safe);
    safe->add_option("--regex", s1_, "Main regex file")->required();
    safe->add_option("--safe", s2_, "Safe regex file")->required();
    safe->add_option("--corpus", s3_, "Corpus file")->required();
    safe->add_option("--scope", scope_, "matched (by the main regex) or all")
        ->default_val("matched")
        ->check(CLI::IsMember({"matched", "all"}));
    safe->add_option("--review", s4_, "Write residual documents as an id/text/snippets TSV");
    safe->callback([this] {
      const auto r = safe_confirm(matcher_from(s1_), matcher_from(s2_), ingest(s3_),
                                  scope_ == "all" ? SafeScope::kAll : SafeScope::kMatchedByMain,
                                  c_.jobs);
      if (c_.tsv()) {
        out_ << "considered\t" << r.considered << "\nauto_confirmed\t" << r.auto_confirmed
             << "\nfraction\t" << number(r.fraction) << '\n';
        for (const auto& id : r.residual_ids) out_ << "residual\t" << id << '\n';
      } else {
        out_ << dump(ordered_json{{"considered", r.considered},
                                  {"auto_confirmed", r.auto_confirmed},
                                  {"fraction", r.fraction},
                                  {"residual_ids", r.residual_ids}})
             << '\n';
      }
      if (!s4_.empty()) write_review(s4_, r.residual);
    });

    auto* gain = add(*eval, "gain", "Matched-weight ratio of an improved regex over a base");
    common(gain);
    gain->add_option("--base", s1_, "Base regex file")->required();
    gain->add_option("--improved", s2_, "Improved regex file")->required();
    gain->add_option("--corpus", s3_, "Corpus file")->required();
    gain->callback([this] {
      const auto g = recall_gain(matcher_from(s1_), matcher_from(s2_), ingest(s3_), c_.jobs);
      const std::string note = "ratio of matched weight; assumes both regexes are high precision";
      if (c_.tsv()) {
        out_ << "base_weight\t" << g.base_weight << "\nimproved_weight\t" << g.improved_weight
             << "\nratio\t" << number(g.ratio) << "\ndisplay\t" << format_gain(g.ratio) << '\n';
      } else {
        out_ << dump(ordered_json{{"base_weight", g.base_weight},
                                  {"improved_weight", g.improved_weight},
                                  {"ratio", g.ratio},
                                  {"display", format_gain(g.ratio)},
                                  {"note", note}})
             << '\n';
      }
    });

    auto* sample = add(*eval, "sample", "Documents matched by at least one of two regexes");
    common(sample);
    sample->add_option("--a", s1_, "First regex file")->required();
    sample->add_option("--b", s2_, "Second regex file")->required();
    sample->add_option("--corpus", s3_, "Corpus file")->required();
    sample->callback([this] {
      for (const auto& d : union_sample(matcher_from(s1_), matcher_from(s2_), ingest(s3_), c_.jobs)) {
        if (c_.tsv()) {
          out_ << d.id << '\t' << cell(d.text) << '\t' << d.matched_a << '\t' << d.matched_b << '\n';
        } else {
          out_ << dump(ordered_json{{"doc_id", d.id},
                                    {"text", d.text},
                                    {"matched_a", d.matched_a},
                                    {"matched_b", d.matched_b}})
               << '\n';
        }
      }
    });
  }

  // bench ------------------------------------------------------------------

  void setup_bench(CLI::App& app) {
    auto* sub = add(app, "bench", "Time matching per text-length bucket (single-threaded)");
    common(sub);
    sub->add_option("--regex", s1_, "Regex file")->required();
    sub->add_option("--texts", s2_, "Corpus file with the texts to time")->required();
    sub->add_option("--reps", reps_, "Timed repetitions per text (>= 3)")->default_val(10);
    sub->callback([this] {
      const Corpus corpus = ingest(s2_);
      std::vector<std::string> texts;
      for (const auto& d : corpus.docs) texts.push_back(d.text);
      const auto report = bench(matcher_from(s1_), texts, reps_);
      for (const auto& b : report.buckets) {
        if (c_.tsv()) {
          out_ << b.text_chars << '\t' << number(b.mean_ms) << '\t' << number(b.std_ms) << '\t'
               << number(b.early_mean_ms) << '\t' << number(b.early_std_ms) << '\t' << b.reps
               << '\n';
        } else {
          out_ << dump(ordered_json{{"text_chars", b.text_chars},
                                    {"mean_ms", b.mean_ms},
                                    {"std_ms", b.std_ms},
                                    {"early_mean_ms", b.early_mean_ms},
                                    {"early_std_ms", b.early_std_ms},
                                    {"reps", b.reps}})
               << '\n';
        }
      }
    });
  }

  // profile / distill ------------------------------------------------------

  void setup_profile(CLI::App& app) {
    auto* sub = add(app, "profile", "Recall loss per chunk when ablated, per corpus");
    common(sub);
    sub->add_option("--regex", s1_, "Regex file")->required();
    sub->add_option("--corpus", corpora_, "Corpus file (repeatable)")->required();
    sub->callback([this] {
      std::vector<Corpus> corpora;
      for (const auto& p : corpora_) corpora.push_back(ingest(p));
      const auto report = profile(load_live_regex(s1_), corpora, c_.jobs);
      for (const auto& w : report.warnings) err_ << dump(ordered_json{{"warning", w}}) << '\n';
      for (const auto& name : report.skipped_corpora) {
        err_ << dump(ordered_json{{"warning", "EMPTY_BASELINE"}, {"corpus", name}}) << '\n';
      }
      if (c_.tsv()) {
        out_ << "chunk\tkind";
        for (const auto& name : report.corpora) out_ << '\t' << cell(name);
        out_ << "\tmax\n";
        for (const auto& row : report.rows) {
          out_ << cell(row.chunk.text) << '\t' << to_string(row.chunk.kind);
          for (const auto& name : report.corpora) {
            out_ << '\t' << (row.skipped ? std::string("skipped") : fmt::format("{:.3f}", row.loss_pct.at(name)));
          }
          out_ << '\t' << (row.skipped ? std::string("skipped") : fmt::format("{:.3f}", row.max_loss))
               << '\n';
        }
        return;
      }
      for (const auto& row : report.rows) {
        ordered_json j{{"chunk", row.chunk.text},
                       {"kind", to_string(row.chunk.kind)},
                       {"occurrences", row.chunk.occurrences.size()},
                       {"precision_guarding", row.chunk.precision_guarding},
                       {"skipped", row.skipped}};
        if (row.skipped) {
          j["reason"] = row.skip_reason;
        } else {
          j["loss_pct"] = row.loss_pct;
          j["gain_pct"] = row.gain_pct;
          j["max_loss"] = row.max_loss;
        }
        out_ << dump(j) << '\n';
      }
    });
  }

  void setup_distill(CLI::App& app) {
    auto* sub = add(app, "distill", "Suggest chunk removals under a recall-loss budget");
    common(sub);
    sub->add_option("--regex", s1_, "Regex file")->required();
    sub->add_option("--corpus", s2_, "Calibration corpus file")->required();
    sub->add_option("--budget", budget_, "Loss budget in percent")->default_val(1.0)->check(CLI::NonNegativeNumber);
    sub->callback([this] {
      const auto r = distill(load_live_regex(s1_), ingest(s2_), budget_, c_.jobs);
      if (c_.tsv()) {
        for (const auto& c : r.suggested_removals) {
          out_ << "remove\t" << to_string(c.kind) << '\t' << cell(c.text) << '\n';
        }
        out_ << "final_loss_pct\t" << number(r.final_loss_pct) << '\n';
        out_ << "final_regex\t" << cell(escape_for_store(r.final_regex)) << '\n';
        return;
      }
      ordered_json removals = ordered_json::array();
      for (const auto& c : r.suggested_removals) {
        removals.push_back({{"chunk", c.text}, {"kind", to_string(c.kind)}});
      }
      out_ << dump(ordered_json{{"suggested_removals", removals},
                                {"final_regex", r.final_regex},
                                {"final_loss_pct", r.final_loss_pct}})
           << '\n';
    });
  }

  // registry ---------------------------------------------------------------

  Registry registry() const {
    return Registry(registry_path_.empty() ? default_registry_path() : fs::path(registry_path_));
  }

  void registry_option(CLI::App* sub) {
    sub->add_option("--registry", registry_path_, "Registry file");
  }

  void key_options(CLI::App* sub, bool language_required = true) {
    sub->add_option("--topic", topic_, "Topic")->required();
    if (language_required) sub->add_option("--language", language_, "Language code")->required();
    sub->add_option("--tier", tier_, "tier1 or tier2")->required()->check(CLI::IsMember({"tier1", "tier2"}));
  }

  ordered_json entry_json(const RegistryEntry& e) const {
    return ordered_json{{"topic", e.topic},         {"language", e.language},
                        {"tier", to_string(e.tier)}, {"version", e.version},
                        {"stored_regex", e.stored_regex}, {"published_at", e.published_at},
                        {"fingerprint", e.fingerprint}};
  }

  void print_entry(const RegistryEntry& e) {
    if (c_.tsv()) {
      out_ << cell(e.topic) << '\t' << cell(e.language) << '\t' << to_string(e.tier) << '\t'
           << e.version << '\t' << e.published_at << '\t' << e.fingerprint << '\t'
           << cell(e.stored_regex) << '\n';
    } else {
      out_ << dump(entry_json(e)) << '\n';
    }
  }

  void setup_registry(CLI::App& app) {
    auto* publish = add(app, "publish", "Validate and append a regex version to the registry");
    common(publish);
    registry_option(publish);
    auto* doc = publish->add_option("--doc", s1_, "Document JSON (key and version taken from it)");
    auto* stored = publish->add_option("--stored", s2_, "Stored-form regex file");
    doc->excludes(stored);
    publish->add_flag("--compact", b1_, "Publish the compact rather than the annotated rendering");
    publish->add_option("--topic", topic_, "Topic (with --stored)");
    publish->add_option("--language", language_, "Language code (with --stored)");
    publish->add_option("--tier", tier_, "tier1 or tier2 (with --stored)");
    publish->add_option("--version", version_, "Version (with --stored)");
    publish->callback([this, doc, stored] {
      RegistryEntry e;
      if (*doc) {
        const auto d = parse_document(read_file(s1_));
        e.topic = d.topic;
        e.language = d.language;
        e.tier = d.tier;
        e.version = d.version;
        e.stored_regex = escape_for_store(b1_ ? render_compact(d) : render_annotated(d));
      } else if (*stored) {
        if (topic_.empty() || language_.empty() || tier_.empty() || !version_) {
          throw CLI::RequiredError("--topic, --language, --tier and --version");
        }
        e.topic = topic_;
        e.language = language_;
        e.tier = parse_tier(tier_);
        e.version = *version_;
        e.stored_regex = strip_one_newline(read_file(s2_));
      } else {
        throw CLI::RequiredError("--doc or --stored");
      }
      const int v = registry().publish(e);
      if (c_.tsv()) {
        out_ << v << '\n';
      } else {
        out_ << dump(ordered_json{{"version", v}}) << '\n';
      }
    });

    auto* fetch = add(app, "fetch", "Fetch the latest or a pinned regex version");
    common(fetch);
    registry_option(fetch);
    key_options(fetch);
    fetch->add_option("--version", version_, "Pinned version");
    fetch->callback([this] {
      print_entry(registry().fetch(topic_, language_, parse_tier(tier_), version_));
    });

    auto* list = add(app, "list", "List registry entries in publication order");
    common(list);
    registry_option(list);
    list->callback([this] {
      for (const auto& e : registry().list()) print_entry(e);
    });

    auto* concat = add(app, "concat", "Alternate the latest regexes of several languages");
    common(concat);
    registry_option(concat);
    key_options(concat, false);
    concat->add_option("--language", languages_, "Language code, in order (repeatable)")->required();
    concat->add_option("--max", max_langs_, "Largest number of regexes to combine")
        ->default_val(kDefaultMaxConcat)
        ->check(CLI::PositiveNumber);
    concat->callback([this] {
      std::vector<RegistryEntry> entries;
      const Registry reg = registry();
      for (const auto& lang : languages_) entries.push_back(reg.fetch(topic_, lang, parse_tier(tier_)));
      const std::string live = concat_for_language(entries, max_langs_);
      if (c_.tsv()) {
        out_ << escape_for_store(live) << '\n';
      } else {
        out_ << dump(ordered_json{{"regex", live}, {"fingerprint", fingerprint_of(live)}}) << '\n';
      }
    });
  }

  std::ostream& out_;
  std::ostream& err_;
  int status_ = 0;
  Common c_;
  std::string s1_, s2_, s3_, s4_;
  bool b1_ = false;
  bool b2_ = false;
  int width_ = 100;
  int reps_ = 10;
  int n_ = 2;
  std::size_t k_diff_ = 10;
  std::size_t k_words_ = 50;
  std::size_t k_cooccur_ = 50;
  std::size_t k_ratio_ = 50;
  std::size_t k_ngrams_ = 50;
  std::size_t window_ = 2;
  double budget_ = 1.0;
  std::string scope_;
  std::vector<std::string> corpora_;
  std::string registry_path_;
  std::string topic_, language_, tier_;
  std::optional<int> version_;
  std::vector<std::string> languages_;
  std::size_t max_langs_ = kDefaultMaxConcat;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return App(out, err).run(args);
}

}  // namespace topickit::cli
