#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "softaug/labels.hpp"

namespace softaug {

enum class Origin { Original, Augmented };

// One text record with its (possibly smoothed) label distribution.
struct Example {
  std::string text;
  LabelVector label;
  Origin origin = Origin::Original;
};

struct Corpus {
  std::vector<Example> examples;
  std::size_t n_classes = 0;
  std::string name;

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
};

// One row of the compiled-in dataset registry.
struct DatasetSpec {
  std::string name;
  std::string task;
  std::size_t n_classes = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
};

// Token <-> id bijection with two reserved ids: padding 0, unknown 1.
class Vocab {
 public:
  static constexpr std::int32_t kPadId = 0;
  static constexpr std::int32_t kUnkId = 1;
  static constexpr const char* kPadToken = "<pad>";
  static constexpr const char* kUnkToken = "<unk>";

  Vocab();

  // Appends the token if absent; returns its id either way.
  std::int32_t add(const std::string& token);

  // kUnkId for out-of-vocabulary tokens.
  std::int32_t id(const std::string& token) const;

  const std::string& token(std::int32_t id) const;
  bool contains(const std::string& token) const { return ids_.count(token) > 0; }
  std::size_t size() const { return tokens_.size(); }

 private:
  std::unordered_map<std::string, std::int32_t> ids_;
  std::vector<std::string> tokens_;
};

// Lowercases, splits on whitespace, strips leading/trailing characters
// outside [a-z0-9'] from each token, drops empties. Pure and deterministic.
std::vector<std::string> tokenize(const std::string& text);

// JSONL corpus: one object per line with string "text" and integer "label"
// in [0, n_classes). Optional fields: "label_dist" (full probability
// vector, overrides "label") and "origin" ("original" | "augmented").
Corpus load_jsonl(const std::string& path, std::size_t n_classes);

// Thin adapter for `label<TAB>text` lines.
Corpus load_tsv(const std::string& path, std::size_t n_classes);

// Writes text, label (argmax), label_dist and origin per line.
void save_jsonl(const std::string& path, const Corpus& corpus);

// Largest "label" value in the file plus one (also checks "label_dist"
// widths). Convenience for CLI use when --n-classes is not given.
std::size_t infer_n_classes(const std::string& path);

// Deterministic shuffle under seed; ceil(fraction*N) examples go to the
// validation side. Both sides preserve the corpus-relative order.
std::pair<Corpus, Corpus> split_validation(const Corpus& corpus, double fraction,
                                           std::uint64_t seed);

// Tokens with frequency >= min_freq, ids assigned by descending frequency
// then lexicographic order, starting at 2.
Vocab build_vocab(const Corpus& corpus, std::size_t min_freq = 2);

void save_vocab(const std::string& path, const Vocab& vocab);
Vocab load_vocab(const std::string& path);

// Registry row for one of the seven benchmark datasets; throws on unknown
// names, listing the valid ones.
DatasetSpec describe_dataset(const std::string& name);
const std::vector<DatasetSpec>& dataset_registry();

// Padded id matrix and label matrix, both row-major.
struct Batch {
  std::size_t rows = 0;
  std::size_t max_len = 0;
  std::size_t n_classes = 0;
  std::vector<std::int32_t> ids;  // rows x max_len
  std::vector<double> labels;     // rows x n_classes

  std::span<const std::int32_t> row(std::size_t r) const {
    return {ids.data() + r * max_len, max_len};
  }
  std::span<const double> label(std::size_t r) const {
    return {labels.data() + r * n_classes, n_classes};
  }
};

// Truncates to max_len (keeping the prefix) and right-pads with kPadId;
// out-of-vocabulary tokens map to kUnkId.
Batch encode_batch(const Vocab& vocab, std::span<const Example> examples, std::size_t max_len);

}  // namespace softaug
