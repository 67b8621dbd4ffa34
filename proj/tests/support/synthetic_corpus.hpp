#pragma once

// Deterministic synthetic corpora for tests and the acceptance run.
//
// The environment has no network access to the published benchmark
// downloads, so the end-to-end checks run on generated question-
// classification data of the same shape: six question classes, short
// sentences, template-with-slots wording over a vocabulary the bundled
// thesaurus covers (so synonym replacement has work to do).

#include <cstdint>

#include "softaug/data.hpp"

namespace softaug::testing {

// `n` six-class questions, classes assigned round-robin. `label_noise` is
// the probability an example keeps its text but gets a random wrong label
// (training-set realism; use 0 for evaluation sets). A quarter of the
// examples use templates shared between class pairs, capping attainable
// accuracy near 87.5% so method comparisons have headroom to differ.
// Same arguments, same corpus — byte for byte.
Corpus make_question_corpus(std::size_t n, std::uint64_t seed, double label_noise = 0.0);

// 32 two-class examples over disjoint word pools; linearly separable by
// construction. Used by the overfit sanity check.
Corpus make_toy_separable();

}  // namespace softaug::testing
