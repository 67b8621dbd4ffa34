#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "softaug/data.hpp"
#include "softaug/lexicon.hpp"
#include "softaug/rng.hpp"

namespace softaug {

enum class AugmentMethod { None, Eda, Aeda, SoftEda };

AugmentMethod parse_method(const std::string& name);
std::string method_name(AugmentMethod method);

struct AugmentPolicy {
  AugmentMethod method = AugmentMethod::None;
  double op_rate = 0.1;         // fraction of tokens one operation touches
  double aeda_ratio = 1.0 / 3.0;
  double alpha = 0.0;           // label smoothing, SoftEda only
  int n_aug = 1;                // augmented copies per original
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument on bad fields
};

// The six punctuation marks AEDA inserts.
const std::vector<std::string>& aeda_marks();
bool is_aeda_mark(const std::string& token);

// Replaces up to n distinct non-stopword tokens that have synonyms with a
// uniformly drawn synonym each. Length never changes.
std::vector<std::string> synonym_replacement(std::vector<std::string> tokens, std::size_t n,
                                             const Thesaurus& thesaurus,
                                             const StopwordSet& stopwords, Rng& rng);

// n times: pick a random non-stopword token with synonyms, pick one of its
// synonyms, insert it at a uniformly random position.
std::vector<std::string> random_insertion(std::vector<std::string> tokens, std::size_t n,
                                          const Thesaurus& thesaurus,
                                          const StopwordSet& stopwords, Rng& rng);

// n times: exchange the tokens at two distinct random indices.
std::vector<std::string> random_swap(std::vector<std::string> tokens, std::size_t n, Rng& rng);

// Deletes each token independently with probability p; if everything would
// be deleted, keeps a single uniformly chosen original token.
std::vector<std::string> random_deletion(const std::vector<std::string>& tokens, double p,
                                         Rng& rng);

// Inserts k punctuation marks at random gaps, k drawn uniformly from
// [1, max(1, floor(ratio*len))]. Throws on empty input.
std::vector<std::string> aeda_insert(const std::vector<std::string>& tokens, double ratio,
                                     Rng& rng);

// One augmented copy of an original example, or nullopt when the text
// tokenizes to nothing (caller drops it).
std::optional<Example> augment_example(const Example& example, const AugmentPolicy& policy,
                                       const Thesaurus& thesaurus, const StopwordSet& stopwords,
                                       Rng& rng);

struct AugmentStats {
  std::size_t originals = 0;
  std::size_t augmented = 0;
  std::size_t skipped_empty = 0;
};

// All originals (labels untouched) followed by n_aug augmented copies per
// original, ordered by (original index, copy index). Each copy draws from
// an Rng stream keyed by (policy.seed, original index, copy index).
Corpus augment_corpus(const Corpus& corpus, const AugmentPolicy& policy,
                      const Thesaurus& thesaurus, const StopwordSet& stopwords,
                      AugmentStats* stats = nullptr);

}  // namespace softaug
