#include "softaug/augment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "softaug/strings.hpp"

namespace softaug {

AugmentMethod parse_method(const std::string& name) {
  const std::string lowered = lower_ascii(trim(name));
  if (lowered == "none") return AugmentMethod::None;
  if (lowered == "eda") return AugmentMethod::Eda;
  if (lowered == "aeda") return AugmentMethod::Aeda;
  if (lowered == "softeda") return AugmentMethod::SoftEda;
  throw std::invalid_argument("unknown augmentation method \"" + name +
                              "\"; expected none, eda, aeda or softeda");
}

std::string method_name(AugmentMethod method) {
  switch (method) {
    case AugmentMethod::None: return "none";
    case AugmentMethod::Eda: return "eda";
    case AugmentMethod::Aeda: return "aeda";
    case AugmentMethod::SoftEda: return "softeda";
  }
  throw std::logic_error("unreachable");
}

void AugmentPolicy::validate() const {
  if (!(op_rate >= 0.0 && op_rate <= 1.0)) {
    throw std::invalid_argument("op_rate must be in [0,1]");
  }
  if (!(aeda_ratio > 0.0 && aeda_ratio <= 1.0)) {
    throw std::invalid_argument("aeda_ratio must be in (0,1]");
  }
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must be in [0,1)");
  }
  if (method != AugmentMethod::SoftEda && alpha != 0.0) {
    throw std::invalid_argument("alpha is only used with method softeda");
  }
  if (n_aug < 1) {
    throw std::invalid_argument("n_aug must be at least 1");
  }
}

const std::vector<std::string>& aeda_marks() {
  static const std::vector<std::string> marks = {".", ";", "?", ":", "!", ","};
  return marks;
}

bool is_aeda_mark(const std::string& token) {
  const auto& marks = aeda_marks();
  return std::find(marks.begin(), marks.end(), token) != marks.end();
}

namespace {

bool eligible_for_synonyms(const std::string& token, const Thesaurus& thesaurus,
                           const StopwordSet& stopwords) {
  return !stopwords.contains(token) && thesaurus.has_synonyms(token);
}

std::vector<std::size_t> eligible_positions(const std::vector<std::string>& tokens,
                                            const Thesaurus& thesaurus,
                                            const StopwordSet& stopwords) {
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (eligible_for_synonyms(tokens[i], thesaurus, stopwords)) positions.push_back(i);
  }
  return positions;
}

}  // namespace

std::vector<std::string> synonym_replacement(std::vector<std::string> tokens, std::size_t n,
                                             const Thesaurus& thesaurus,
                                             const StopwordSet& stopwords, Rng& rng) {
  if (n == 0 || tokens.empty()) return tokens;
  const auto positions = eligible_positions(tokens, thesaurus, stopwords);
  if (positions.empty()) return tokens;
  const auto chosen = rng.sample_indices(positions.size(), std::min(n, positions.size()));
  for (std::size_t pick : chosen) {
    const std::size_t pos = positions[pick];
    const auto& candidates = thesaurus.synonyms(tokens[pos]);
    tokens[pos] = candidates[rng.next_index(candidates.size())];
  }
  return tokens;
}

std::vector<std::string> random_insertion(std::vector<std::string> tokens, std::size_t n,
                                          const Thesaurus& thesaurus,
                                          const StopwordSet& stopwords, Rng& rng) {
  for (std::size_t round = 0; round < n; ++round) {
    const auto positions = eligible_positions(tokens, thesaurus, stopwords);
    if (positions.empty()) break;
    const std::size_t pos = positions[rng.next_index(positions.size())];
    const auto& candidates = thesaurus.synonyms(tokens[pos]);
    const std::string synonym = candidates[rng.next_index(candidates.size())];
    const std::size_t gap = rng.next_index(tokens.size() + 1);
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(gap), synonym);
  }
  return tokens;
}

std::vector<std::string> random_swap(std::vector<std::string> tokens, std::size_t n, Rng& rng) {
  if (tokens.size() < 2) return tokens;
  for (std::size_t round = 0; round < n; ++round) {
    const std::size_t i = rng.next_index(tokens.size());
    std::size_t j = rng.next_index(tokens.size() - 1);
    if (j >= i) ++j;
    std::swap(tokens[i], tokens[j]);
  }
  return tokens;
}

std::vector<std::string> random_deletion(const std::vector<std::string>& tokens, double p,
                                         Rng& rng) {
  if (tokens.empty()) return {};
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (const auto& token : tokens) {
    if (!rng.next_bernoulli(p)) kept.push_back(token);
  }
  if (kept.empty()) {
    // EDA's survivor rule: keep one uniformly chosen original token.
    kept.push_back(tokens[rng.next_index(tokens.size())]);
  }
  return kept;
}

std::vector<std::string> aeda_insert(const std::vector<std::string>& tokens, double ratio,
                                     Rng& rng) {
  if (tokens.empty()) throw std::invalid_argument("aeda_insert: empty token list");
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw std::invalid_argument("aeda_insert: ratio must be in (0,1]");
  }
  const auto& marks = aeda_marks();
  const auto k_max = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(ratio * static_cast<double>(tokens.size()))));
  const std::size_t k = 1 + rng.next_index(k_max);
  std::vector<std::string> out = tokens;
  for (std::size_t i = 0; i < k; ++i) {
    const std::string& mark = marks[rng.next_index(marks.size())];
    const std::size_t gap = rng.next_index(out.size() + 1);
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(gap), mark);
  }
  return out;
}

std::optional<Example> augment_example(const Example& example, const AugmentPolicy& policy,
                                       const Thesaurus& thesaurus, const StopwordSet& stopwords,
                                       Rng& rng) {
  if (policy.method == AugmentMethod::None) {
    throw std::invalid_argument("augment_example: method must not be none");
  }
  if (example.origin != Origin::Original) {
    throw std::invalid_argument("augment_example: input must be an original example");
  }
  std::vector<std::string> tokens = tokenize(example.text);
  if (tokens.empty()) return std::nullopt;

  std::vector<std::string> out_tokens;
  if (policy.method == AugmentMethod::Aeda) {
    out_tokens = aeda_insert(tokens, policy.aeda_ratio, rng);
  } else {
    // One sub-operation per augmented example, drawn uniformly from the four.
    const std::size_t op = rng.next_index(4);
    const auto strength = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::llround(policy.op_rate * static_cast<double>(tokens.size()))));
    switch (op) {
      case 0:
        out_tokens = synonym_replacement(std::move(tokens), strength, thesaurus, stopwords, rng);
        break;
      case 1:
        out_tokens = random_insertion(std::move(tokens), strength, thesaurus, stopwords, rng);
        break;
      case 2:
        out_tokens = random_swap(std::move(tokens), strength, rng);
        break;
      default:
        out_tokens = random_deletion(tokens, policy.op_rate, rng);
        break;
    }
  }

  Example out;
  out.text = join(out_tokens);
  out.origin = Origin::Augmented;
  if (policy.method == AugmentMethod::SoftEda) {
    out.label = smooth(example.label, SmoothingAlpha(policy.alpha));
  } else {
    out.label = example.label;
  }
  return out;
}

Corpus augment_corpus(const Corpus& corpus, const AugmentPolicy& policy,
                      const Thesaurus& thesaurus, const StopwordSet& stopwords,
                      AugmentStats* stats) {
  if (corpus.empty()) throw std::invalid_argument("augment_corpus: corpus is empty");
  policy.validate();
  if (stats) *stats = AugmentStats{};
  if (policy.method == AugmentMethod::None) {
    if (stats) stats->originals = corpus.size();
    return corpus;
  }

  Corpus out;
  out.n_classes = corpus.n_classes;
  out.name = corpus.name;
  out.examples = corpus.examples;
  out.examples.reserve(corpus.size() * (1 + static_cast<std::size_t>(policy.n_aug)));
  if (stats) stats->originals = corpus.size();

  for (std::size_t index = 0; index < corpus.size(); ++index) {
    for (int copy = 0; copy < policy.n_aug; ++copy) {
      Rng rng = Rng::keyed(policy.seed, index, static_cast<std::uint64_t>(copy));
      auto augmented =
          augment_example(corpus.examples[index], policy, thesaurus, stopwords, rng);
      if (!augmented) {
        if (stats) ++stats->skipped_empty;
        continue;
      }
      out.examples.push_back(std::move(*augmented));
      if (stats) ++stats->augmented;
    }
  }
  return out;
}

}  // namespace softaug
