#include "softaug/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "softaug/rng.hpp"
#include "softaug/strings.hpp"

namespace softaug {

namespace {

bool keep_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\'';
}

std::runtime_error line_error(const std::string& path, std::size_t line_no,
                              const std::string& what) {
  return std::runtime_error(path + ": " + what + " at line " + std::to_string(line_no));
}

}  // namespace

Vocab::Vocab() {
  tokens_ = {kPadToken, kUnkToken};
  ids_ = {{kPadToken, kPadId}, {kUnkToken, kUnkId}};
}

std::int32_t Vocab::add(const std::string& token) {
  auto it = ids_.find(token);
  if (it != ids_.end()) return it->second;
  auto id = static_cast<std::int32_t>(tokens_.size());
  tokens_.push_back(token);
  ids_.emplace(token, id);
  return id;
}

std::int32_t Vocab::id(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnkId : it->second;
}

const std::string& Vocab::token(std::int32_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw std::out_of_range("vocab id " + std::to_string(id) + " out of range");
  }
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  const std::string lowered = lower_ascii(text);
  std::size_t i = 0;
  while (i < lowered.size()) {
    while (i < lowered.size() && std::isspace(static_cast<unsigned char>(lowered[i]))) ++i;
    std::size_t start = i;
    while (i < lowered.size() && !std::isspace(static_cast<unsigned char>(lowered[i]))) ++i;
    if (i == start) continue;
    std::size_t begin = start;
    std::size_t end = i;
    while (begin < end && !keep_char(lowered[begin])) ++begin;
    while (end > begin && !keep_char(lowered[end - 1])) --end;
    if (end > begin) tokens.push_back(lowered.substr(begin, end - begin));
  }
  return tokens;
}

namespace {

Example parse_jsonl_line(const std::string& path, std::size_t line_no, const std::string& line,
                         std::size_t n_classes) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw line_error(path, line_no, std::string("malformed JSON (") + e.what() + ")");
  }
  if (!obj.is_object()) throw line_error(path, line_no, "expected a JSON object");
  if (!obj.contains("text") || !obj["text"].is_string()) {
    throw line_error(path, line_no, "missing string field \"text\"");
  }
  Example ex;
  ex.text = obj["text"].get<std::string>();
  if (trim(ex.text).empty()) throw line_error(path, line_no, "empty text");

  if (obj.contains("label_dist")) {
    const auto& dist = obj["label_dist"];
    if (!dist.is_array() || dist.size() != n_classes) {
      throw line_error(path, line_no, "label_dist must be an array of length " +
                                          std::to_string(n_classes));
    }
    LabelVector label;
    label.reserve(n_classes);
    for (const auto& c : dist) {
      if (!c.is_number()) throw line_error(path, line_no, "label_dist entries must be numbers");
      label.push_back(c.get<double>());
    }
    try {
      validate_label(label);
    } catch (const std::exception& e) {
      throw line_error(path, line_no, std::string("invalid label_dist: ") + e.what());
    }
    ex.label = std::move(label);
  } else {
    if (!obj.contains("label") || !obj["label"].is_number_integer()) {
      throw line_error(path, line_no, "missing integer field \"label\"");
    }
    const auto raw = obj["label"].get<long long>();
    if (raw < 0 || static_cast<std::size_t>(raw) >= n_classes) {
      throw std::runtime_error(path + ": label out of range at line " + std::to_string(line_no) +
                               ": " + std::to_string(raw) + " not in [0, " +
                               std::to_string(n_classes) + ")");
    }
    ex.label = one_hot(static_cast<std::size_t>(raw), n_classes);
  }

  if (obj.contains("origin")) {
    const std::string origin = obj["origin"].get<std::string>();
    if (origin == "original") {
      ex.origin = Origin::Original;
    } else if (origin == "augmented") {
      ex.origin = Origin::Augmented;
    } else {
      throw line_error(path, line_no, "unknown origin \"" + origin + "\"");
    }
  }
  return ex;
}

}  // namespace

Corpus load_jsonl(const std::string& path, std::size_t n_classes) {
  if (n_classes < 2) throw std::invalid_argument("load_jsonl: n_classes must be >= 2");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  Corpus corpus;
  corpus.n_classes = n_classes;
  corpus.name = path;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    corpus.examples.push_back(parse_jsonl_line(path, line_no, line, n_classes));
  }
  return corpus;
}

Corpus load_tsv(const std::string& path, std::size_t n_classes) {
  if (n_classes < 2) throw std::invalid_argument("load_tsv: n_classes must be >= 2");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  Corpus corpus;
  corpus.n_classes = n_classes;
  corpus.name = path;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) throw line_error(path, line_no, "missing TAB separator");
    const std::string label_field = trim(line.substr(0, tab));
    std::size_t cls = 0;
    try {
      cls = std::stoul(label_field);
    } catch (const std::exception&) {
      throw line_error(path, line_no, "label \"" + label_field + "\" is not an integer");
    }
    if (cls >= n_classes) {
      throw line_error(path, line_no, "label out of range: " + std::to_string(cls) +
                                          " not in [0, " + std::to_string(n_classes) + ")");
    }
    Example ex;
    ex.text = line.substr(tab + 1);
    if (trim(ex.text).empty()) throw line_error(path, line_no, "empty text");
    ex.label = one_hot(cls, n_classes);
    corpus.examples.push_back(std::move(ex));
  }
  return corpus;
}

void save_jsonl(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  for (const auto& ex : corpus.examples) {
    nlohmann::ordered_json obj;
    obj["text"] = ex.text;
    obj["label"] = argmax_class(ex.label);
    obj["label_dist"] = ex.label;
    obj["origin"] = ex.origin == Origin::Original ? "original" : "augmented";
    out << obj.dump() << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::size_t infer_n_classes(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  std::string line;
  std::size_t line_no = 0;
  long long max_label = -1;
  std::size_t max_dist = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw line_error(path, line_no, std::string("malformed JSON (") + e.what() + ")");
    }
    if (obj.contains("label") && obj["label"].is_number_integer()) {
      max_label = std::max(max_label, obj["label"].get<long long>());
    }
    if (obj.contains("label_dist") && obj["label_dist"].is_array()) {
      max_dist = std::max(max_dist, obj["label_dist"].size());
    }
  }
  const std::size_t from_label = max_label >= 0 ? static_cast<std::size_t>(max_label) + 1 : 0;
  return std::max<std::size_t>(2, std::max(from_label, max_dist));
}

std::pair<Corpus, Corpus> split_validation(const Corpus& corpus, double fraction,
                                           std::uint64_t seed) {
  if (corpus.size() < 2) {
    throw std::invalid_argument("split_validation: corpus must have at least 2 examples");
  }
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("split_validation: fraction must be in (0,1)");
  }
  const std::size_t n = corpus.size();
  const auto n_val =
      static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<std::size_t> val_idx(order.begin(), order.begin() + n_val);
  std::vector<std::size_t> train_idx(order.begin() + n_val, order.end());
  std::sort(val_idx.begin(), val_idx.end());
  std::sort(train_idx.begin(), train_idx.end());

  Corpus train_part, val_part;
  train_part.n_classes = val_part.n_classes = corpus.n_classes;
  train_part.name = corpus.name + "/train";
  val_part.name = corpus.name + "/val";
  train_part.examples.reserve(train_idx.size());
  val_part.examples.reserve(val_idx.size());
  for (std::size_t i : train_idx) train_part.examples.push_back(corpus.examples[i]);
  for (std::size_t i : val_idx) val_part.examples.push_back(corpus.examples[i]);
  return {std::move(train_part), std::move(val_part)};
}

Vocab build_vocab(const Corpus& corpus, std::size_t min_freq) {
  if (corpus.empty()) throw std::invalid_argument("build_vocab: corpus is empty");
  std::unordered_map<std::string, std::size_t> freq;
  for (const auto& ex : corpus.examples) {
    for (auto& tok : tokenize(ex.text)) ++freq[tok];
  }
  std::vector<std::pair<std::string, std::size_t>> entries(freq.begin(), freq.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocab vocab;
  for (const auto& [token, count] : entries) {
    if (count >= min_freq) vocab.add(token);
  }
  return vocab;
}

void save_vocab(const std::string& path, const Vocab& vocab) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    out << vocab.token(static_cast<std::int32_t>(i)) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path);
}

Vocab load_vocab(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vocab file: " + path);
  Vocab vocab;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != Vocab::kPadToken) throw line_error(path, 1, "expected <pad>");
      continue;
    }
    if (line_no == 2) {
      if (line != Vocab::kUnkToken) throw line_error(path, 2, "expected <unk>");
      continue;
    }
    if (line.empty()) continue;
    vocab.add(line);
  }
  return vocab;
}

const std::vector<DatasetSpec>& dataset_registry() {
  static const std::vector<DatasetSpec> registry = {
      {"SST2", "Sentiment", 2, 6919, 1820},
      {"CR", "Sentiment", 2, 3011, 752},
      {"MR", "Sentiment", 2, 9593, 1067},
      {"TREC", "Question Type", 6, 5452, 500},
      {"SUBJ", "Subjectivity", 2, 8000, 2000},
      {"PC", "Pro-Con", 2, 39418, 4506},
      {"CoLA", "Linguistic Acceptability", 2, 8551, 527},
  };
  return registry;
}

DatasetSpec describe_dataset(const std::string& name) {
  for (const auto& spec : dataset_registry()) {
    if (spec.name == name) return spec;
  }
  std::string valid;
  for (const auto& spec : dataset_registry()) {
    if (!valid.empty()) valid += ", ";
    valid += spec.name;
  }
  throw std::invalid_argument("unknown dataset \"" + name + "\"; valid names: " + valid);
}

Batch encode_batch(const Vocab& vocab, std::span<const Example> examples, std::size_t max_len) {
  if (max_len < 1) throw std::invalid_argument("encode_batch: max_len must be >= 1");
  Batch batch;
  batch.rows = examples.size();
  batch.max_len = max_len;
  batch.n_classes = examples.empty() ? 0 : examples.front().label.size();
  batch.ids.assign(batch.rows * max_len, Vocab::kPadId);
  batch.labels.resize(batch.rows * batch.n_classes);
  for (std::size_t r = 0; r < batch.rows; ++r) {
    const Example& ex = examples[r];
    if (ex.label.size() != batch.n_classes) {
      throw std::invalid_argument("encode_batch: inconsistent label widths");
    }
    const auto tokens = tokenize(ex.text);
    const std::size_t len = std::min(tokens.size(), max_len);
    for (std::size_t t = 0; t < len; ++t) {
      batch.ids[r * max_len + t] = vocab.id(tokens[t]);
    }
    std::copy(ex.label.begin(), ex.label.end(), batch.labels.begin() + r * batch.n_classes);
  }
  return batch;
}

}  // namespace softaug
