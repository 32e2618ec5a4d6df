#include "topickit/variants.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "topickit/error.hpp"
#include "topickit/regex_syntax.hpp"

namespace topickit {
namespace {

using syntax::ClassRange;
using syntax::Node;
using syntax::NodeKind;

constexpr std::size_t kMaxNfaStates = 1'000'000;

// Thompson NFA without loops: the fragment grammar has no unbounded
// repetition, so the automaton (and its subset construction) is acyclic.
struct Nfa {
  struct Edge {
    int to;
    std::vector<ClassRange> label;  // empty label = epsilon
  };
  std::vector<std::vector<Edge>> out;

  int add_state() {
    if (out.size() >= kMaxNfaStates) {
      throw Error(ErrorCode::kUnboundedFragment, "fragment expands to too many states");
    }
    out.emplace_back();
    return static_cast<int>(out.size()) - 1;
  }
  void epsilon(int from, int to) { out[from].push_back({to, {}}); }
  void labeled(int from, int to, std::vector<ClassRange> label) {
    out[from].push_back({to, std::move(label)});
  }
};

[[noreturn]] void unsupported(const Node& n, const char* what) {
  throw Error(ErrorCode::kUnboundedFragment, what, "offset " + std::to_string(n.begin));
}

// Builds the sub-automaton for `n` between fresh states; returns (start, end).
std::pair<int, int> build(Nfa& nfa, const Node& n) {
  switch (n.kind) {
    case NodeKind::kLiteral: {
      const int s = nfa.add_state();
      const int e = nfa.add_state();
      nfa.labeled(s, e, {{n.literal, n.literal}});
      return {s, e};
    }
    case NodeKind::kClass: {
      if (n.negated) unsupported(n, "negated character class");
      if (n.class_has_shorthand) unsupported(n, "shorthand inside character class");
      const int s = nfa.add_state();
      const int e = nfa.add_state();
      if (!n.ranges.empty()) nfa.labeled(s, e, n.ranges);
      return {s, e};
    }
    case NodeKind::kSequence: {
      const int s = nfa.add_state();
      int cur = s;
      for (const auto& item : n.children) {
        auto [is, ie] = build(nfa, item);
        nfa.epsilon(cur, is);
        cur = ie;
      }
      return {s, cur};
    }
    case NodeKind::kAlternation: {
      const int s = nfa.add_state();
      const int e = nfa.add_state();
      for (const auto& alt : n.children) {
        auto [as, ae] = build(nfa, alt);
        nfa.epsilon(s, as);
        nfa.epsilon(ae, e);
      }
      return {s, e};
    }
    case NodeKind::kGroup: {
      if (n.group != syntax::GroupKind::kCapture && n.group != syntax::GroupKind::kNonCapture) {
        unsupported(n, "lookaround or special group");
      }
      return build(nfa, n.children.at(0));
    }
    case NodeKind::kQuantified: {
      if (!n.max) unsupported(n, "unbounded repetition");
      if (n.possessive) unsupported(n, "possessive quantifier");
      const Node& atom = n.children.at(0);
      const int s = nfa.add_state();
      int cur = s;
      for (std::size_t i = 0; i < n.min; ++i) {
        auto [as, ae] = build(nfa, atom);
        nfa.epsilon(cur, as);
        cur = ae;
      }
      const int e = nfa.add_state();
      nfa.epsilon(cur, e);
      for (std::size_t i = n.min; i < *n.max; ++i) {
        auto [as, ae] = build(nfa, atom);
        nfa.epsilon(cur, as);
        nfa.epsilon(ae, e);
        cur = ae;
      }
      return {s, e};
    }
    case NodeKind::kEscape:
      unsupported(n, "escape class or assertion");
    case NodeKind::kDot:
      unsupported(n, "wildcard");
    case NodeKind::kAnchor:
      unsupported(n, "anchor");
  }
  unsupported(n, "unsupported construct");
}

using StateSet = std::vector<int>;

class Counter {
 public:
  Counter(const Nfa& nfa, int accept) : nfa_(nfa), accept_(accept) {}

  StateSet closure(StateSet seeds) const {
    std::vector<bool> seen(nfa_.out.size(), false);
    StateSet stack = std::move(seeds);
    StateSet result;
    while (!stack.empty()) {
      const int s = stack.back();
      stack.pop_back();
      if (seen[s]) continue;
      seen[s] = true;
      result.push_back(s);
      for (const auto& edge : nfa_.out[s]) {
        if (edge.label.empty() && !seen[edge.to]) stack.push_back(edge.to);
      }
    }
    std::sort(result.begin(), result.end());
    return result;
  }

  std::uint64_t count(const StateSet& set) {
    if (auto it = memo_.find(set); it != memo_.end()) return it->second;
    std::uint64_t total = std::binary_search(set.begin(), set.end(), accept_) ? 1 : 0;

    // Split the alphabet into elementary intervals on which every outgoing
    // edge is either fully on or fully off.
    struct Arc {
      char32_t lo, hi;
      int to;
    };
    std::vector<Arc> arcs;
    std::vector<char32_t> cuts;
    for (int s : set) {
      for (const auto& edge : nfa_.out[s]) {
        for (const auto& r : edge.label) {
          arcs.push_back({r.lo, r.hi, edge.to});
          cuts.push_back(r.lo);
          cuts.push_back(r.hi + 1);
        }
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // Intervals with identical targets share one recursive count.
    std::map<StateSet, std::uint64_t> width_by_target;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const char32_t lo = cuts[i];
      StateSet targets;
      for (const auto& a : arcs) {
        if (a.lo <= lo && lo <= a.hi) targets.push_back(a.to);
      }
      if (targets.empty()) continue;
      std::sort(targets.begin(), targets.end());
      targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
      width_by_target[closure(std::move(targets))] += cuts[i + 1] - lo;
    }
    for (const auto& [target, width] : width_by_target) {
      std::uint64_t product = 0;
      if (__builtin_mul_overflow(width, count(target), &product) ||
          __builtin_add_overflow(total, product, &total)) {
        throw Error(ErrorCode::kVariantOverflow, "variant count exceeds 64 bits");
      }
    }
    memo_.emplace(set, total);
    return total;
  }

 private:
  const Nfa& nfa_;
  int accept_;
  std::map<StateSet, std::uint64_t> memo_;
};

}  // namespace

std::uint64_t count_variants(std::string_view fragment) {
  Node root;
  try {
    root = syntax::parse(fragment);
  } catch (const Error& e) {
    throw Error(ErrorCode::kUnboundedFragment, e.what(), e.location());
  }
  Nfa nfa;
  auto [start, accept] = build(nfa, root);
  Counter counter(nfa, accept);
  return counter.count(counter.closure({start}));
}

}  // namespace topickit
