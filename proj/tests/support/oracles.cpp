#include "oracles.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "topickit/matcher.hpp"

namespace topickit::testing {
namespace {

using Set = std::set<std::string>;

Set concat(const Set& a, const Set& b) {
  Set out;
  for (const auto& x : a) {
    for (const auto& y : b) out.insert(x + y);
  }
  return out;
}

class Expander {
 public:
  explicit Expander(std::string_view s) : s_(s) {}

  Set all() {
    Set r = alternation();
    if (i_ != s_.size()) throw std::invalid_argument("trailing input");
    return r;
  }

 private:
  Set alternation() {
    Set r = sequence();
    while (i_ < s_.size() && s_[i_] == '|') {
      ++i_;
      Set more = sequence();
      r.insert(more.begin(), more.end());
    }
    return r;
  }

  Set sequence() {
    Set r{""};
    while (i_ < s_.size() && s_[i_] != '|' && s_[i_] != ')') r = concat(r, quantified());
    return r;
  }

  Set quantified() {
    Set a = atom();
    int lo = 1, hi = 1;
    if (i_ < s_.size() && s_[i_] == '?') {
      lo = 0;
      ++i_;
    } else if (i_ < s_.size() && s_[i_] == '{') {
      const auto close = s_.find('}', i_);
      const auto body = std::string(s_.substr(i_ + 1, close - i_ - 1));
      const auto comma = body.find(',');
      if (comma == std::string::npos || comma + 1 == body.size()) {
        throw std::invalid_argument("unsupported repetition");
      }
      lo = std::stoi(body.substr(0, comma));
      hi = std::stoi(body.substr(comma + 1));
      i_ = close + 1;
    }
    Set out;
    Set power{""};
    for (int n = 0; n <= hi; ++n) {
      if (n >= lo) out.insert(power.begin(), power.end());
      power = concat(power, a);
    }
    return out;
  }

  Set atom() {
    const char c = s_[i_];
    if (c == '(') {
      ++i_;
      if (s_.substr(i_, 2) == "?:") i_ += 2;
      Set r = alternation();
      if (i_ >= s_.size() || s_[i_] != ')') throw std::invalid_argument("unbalanced");
      ++i_;
      return r;
    }
    if (c == '[') {
      ++i_;
      Set r;
      while (s_[i_] != ']') {
        const char lo = s_[i_];
        if (i_ + 2 < s_.size() && s_[i_ + 1] == '-' && s_[i_ + 2] != ']') {
          for (char x = lo; x <= s_[i_ + 2]; ++x) r.insert(std::string(1, x));
          i_ += 3;
        } else {
          r.insert(std::string(1, lo));
          ++i_;
        }
      }
      ++i_;
      return r;
    }
    if (std::string_view("\\.*+^$").find(c) != std::string_view::npos) {
      throw std::invalid_argument("unsupported construct");
    }
    // UTF-8 continuation bytes stay attached to their lead byte.
    std::size_t len = 1;
    while (i_ + len < s_.size() && (static_cast<unsigned char>(s_[i_ + len]) & 0xC0) == 0x80) ++len;
    Set r{std::string(s_.substr(i_, len))};
    i_ += len;
    return r;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace

std::set<std::string> expand_fragment(std::string_view fragment) { return Expander(fragment).all(); }

std::vector<bool> matched_by(const std::string& live, const Corpus& corpus) {
  const auto m = CompiledTopicMatcher::compile(live);
  std::vector<bool> out;
  for (const auto& d : corpus.docs) out.push_back(m.classify(d.text).matched);
  return out;
}

std::uint64_t weight_of(const Corpus& corpus, const std::vector<bool>& a,
                        const std::vector<bool>& b, bool a_value, bool b_value) {
  std::uint64_t w = 0;
  for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
    if (a[i] == a_value && b[i] == b_value) w += corpus.docs[i].weight;
  }
  return w;
}

std::string substitute(std::string regex, std::vector<std::pair<std::size_t, std::size_t>> spans,
                       std::string_view literal) {
  std::sort(spans.begin(), spans.end());
  for (auto it = spans.rbegin(); it != spans.rend(); ++it) {
    regex.replace(it->first, it->second - it->first, literal);
  }
  return regex;
}

std::map<std::string, RecountRow> ablation_recount(
    const std::string& regex, const std::vector<std::pair<std::size_t, std::size_t>>& spans,
    const std::vector<Corpus>& corpora) {
  const std::string ablated = substitute(regex, spans, "foobar123");
  std::map<std::string, RecountRow> out;
  for (const auto& c : corpora) {
    const auto before = matched_by(regex, c);
    const auto after = matched_by(ablated, c);
    RecountRow row;
    row.base = weight_of(c, before, before, true, true);
    row.lost = weight_of(c, before, after, true, false);
    row.gained = weight_of(c, before, after, false, true);
    out[c.name] = row;
  }
  return out;
}

Confusion confusion_recount(const std::string& live, const Corpus& labeled) {
  const auto decisions = matched_by(live, labeled);
  Confusion c;
  for (std::size_t i = 0; i < labeled.docs.size(); ++i) {
    const bool pos = labeled.docs[i].label == Label::kPositive;
    const auto w = labeled.docs[i].weight;
    if (decisions[i] && pos) c.tp += w;
    if (decisions[i] && !pos) c.fp += w;
    if (!decisions[i] && pos) c.fn += w;
    if (!decisions[i] && !pos) c.tn += w;
  }
  return c;
}

std::map<std::string, std::uint64_t> ascii_doc_frequency(const Corpus& corpus,
                                                         const std::vector<bool>& selected) {
  std::map<std::string, std::uint64_t> df;
  for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
    if (!selected[i]) continue;
    std::set<std::string> seen;
    const std::string& t = corpus.docs[i].text;
    std::size_t j = 0;
    while (j < t.size()) {
      auto word = [&](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
      if (!word(t[j])) {
        ++j;
        continue;
      }
      std::size_t b = j;
      while (j < t.size() && word(t[j])) ++j;
      std::string tok = t.substr(b, j - b);
      for (char& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (b > 0 && t[b - 1] == '#') tok = "#" + tok;
      seen.insert(tok);
    }
    for (const auto& tok : seen) df[tok] += corpus.docs[i].weight;
  }
  return df;
}

}  // namespace topickit::testing
