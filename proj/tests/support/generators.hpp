#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "topickit/corpus.hpp"
#include "topickit/document.hpp"

// Seeded generators for property tests. Alphabets are tiny so random texts
// hit random patterns often.
namespace topickit::testing {

using Rng = std::mt19937_64;

// Finite-language fragment over {a,b,c,d}: literals, classes, optional
// atoms, small alternation groups.
std::string random_finite_fragment(Rng& rng, int max_atoms = 4);

// Fragment usable in any clause slot; may add word boundaries.
std::string random_word_fragment(Rng& rng);

RegexDocument random_document(Rng& rng);

// Text over letters a-d, digits, spaces, punctuation and newlines.
std::string random_text(Rng& rng, int max_len = 40);

// Regex for matcher properties: alternation of word fragments with optional
// lazy gaps and trailing negative lookahead.
std::string random_matcher_regex(Rng& rng, bool allow_lookaround = true);

Corpus random_corpus(Rng& rng, std::size_t docs, int max_len = 30, bool labeled = false);

}  // namespace topickit::testing
