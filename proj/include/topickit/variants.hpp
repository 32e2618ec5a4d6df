#pragma once

#include <cstdint>
#include <string_view>

namespace topickit {

// Number of distinct strings denoted by a finite-language fragment built from
// literals, character classes, groups, alternation and bounded repetition
// ("?", "{m,n}"). Strings reachable in more than one way count once, so
// "[aa]" and "(a|a)" both count 1.
//
// Throws Error(kUnboundedFragment) for "*", "+", "{m,}", lookaround, "\b",
// "\d", ".", negated classes and anything else outside that subset, and
// Error(kVariantOverflow) if the count exceeds 2^64 - 1.
std::uint64_t count_variants(std::string_view fragment);

}  // namespace topickit
