#include "topickit/engine.hpp"

#include <boost/regex/icu.hpp>

#include "topickit/error.hpp"

namespace topickit {

struct Pattern::Impl {
  boost::u32regex regex;
};

namespace {

constexpr auto kSyntax = boost::regex::perl | boost::regex::no_mod_s;

boost::u32regex build(std::string_view live) {
  const auto* first = reinterpret_cast<const unsigned char*>(live.data());
  return boost::make_u32regex(first, first + live.size(), kSyntax);
}

}  // namespace

Pattern::Pattern(std::shared_ptr<const Impl> impl, std::string source)
    : impl_(std::move(impl)), source_(std::move(source)) {}

Pattern Pattern::compile(std::string_view live) {
  try {
    auto impl = std::make_shared<Impl>(Impl{build(live)});
    return Pattern(std::move(impl), std::string(live));
  } catch (const boost::regex_error& e) {
    throw Error(ErrorCode::kCompileFail, e.what(),
                "offset " + std::to_string(e.position()));
  }
}

std::optional<CompileDiagnostic> compile_error(std::string_view live) {
  try {
    (void)build(live);
    return std::nullopt;
  } catch (const boost::regex_error& e) {
    return CompileDiagnostic{e.what(), static_cast<std::size_t>(e.position())};
  }
}

std::optional<Span> Pattern::find(std::u32string_view text, std::size_t from) const {
  if (from > text.size()) return std::nullopt;
  const char32_t* base = text.data();
  const char32_t* first = base + from;
  const char32_t* last = base + text.size();
  auto flags = boost::match_not_null;
  if (from > 0) flags |= boost::match_prev_avail;
  boost::match_results<const char32_t*> m;
  bool found = false;
  try {
    found = boost::u32regex_search(first, last, m, impl_->regex, flags);
  } catch (const std::runtime_error& e) {
    // Boost aborts pathological backtracking instead of hanging.
    throw Error(ErrorCode::kMatchFailure, e.what());
  }
  if (!found) return std::nullopt;
  return Span{static_cast<std::size_t>(m[0].first - base),
              static_cast<std::size_t>(m[0].second - base)};
}

bool Pattern::search(std::u32string_view text) const { return find(text).has_value(); }

std::vector<Span> Pattern::find_all(std::u32string_view text) const {
  std::vector<Span> out;
  std::size_t from = 0;
  while (auto m = find(text, from)) {
    out.push_back(*m);
    from = m->end;
  }
  return out;
}

std::u32string Pattern::remove_all(std::u32string_view text) const {
  std::u32string out;
  std::size_t cursor = 0;
  for (const Span& s : find_all(text)) {
    out.append(text.substr(cursor, s.begin - cursor));
    cursor = s.end;
  }
  out.append(text.substr(cursor));
  return out;
}

}  // namespace topickit
