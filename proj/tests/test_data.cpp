#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "softaug/data.hpp"
#include "softaug/rng.hpp"
#include "softaug/strings.hpp"

using namespace softaug;
namespace fs = std::filesystem;

namespace {

std::string temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "softaug_data_tests";
  fs::create_directories(dir);
  return (dir / name).string();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::multiset<std::string> texts(const Corpus& corpus) {
  std::multiset<std::string> out;
  for (const auto& ex : corpus.examples) out.insert(ex.text);
  return out;
}

}  // namespace

TEST_CASE("tokenize lowercases, splits, and strips edge punctuation") {
  CHECK(tokenize("A good movie.") == std::vector<std::string>{"a", "good", "movie"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("don't STOP!!") == std::vector<std::string>{"don't", "stop"});
  CHECK(tokenize("  (hello)   WORLD?! 42 ") == std::vector<std::string>{"hello", "world", "42"});
  CHECK(tokenize("...").empty());
}

TEST_CASE("tokenize is idempotent over join") {
  Rng rng(71);
  const std::string charset = "abcXYZ 0'!?.,;:()- \t";
  for (int trial = 0; trial < 1000; ++trial) {
    std::string s;
    const std::size_t len = rng.next_index(40);
    for (std::size_t i = 0; i < len; ++i) s += charset[rng.next_index(charset.size())];
    const auto once = tokenize(s);
    CHECK(tokenize(join(once)) == once);
  }
}

TEST_CASE("load_jsonl builds one-hot corpora in line order") {
  const std::string path = temp_path("basic.jsonl");
  write_file(path, "{\"text\":\"good\",\"label\":1}\n{\"text\":\"bad\",\"label\":0}\n");
  const Corpus corpus = load_jsonl(path, 2);
  REQUIRE(corpus.size() == 2);
  CHECK(corpus.examples[0].text == "good");
  CHECK(corpus.examples[0].label == LabelVector{0.0, 1.0});
  CHECK(corpus.examples[1].label == LabelVector{1.0, 0.0});
  CHECK(corpus.examples[0].origin == Origin::Original);
  CHECK(corpus.n_classes == 2);
}

TEST_CASE("load_jsonl on an empty file yields an empty corpus") {
  const std::string path = temp_path("empty.jsonl");
  write_file(path, "");
  CHECK(load_jsonl(path, 2).empty());
}

TEST_CASE("load_jsonl names the offending line") {
  const std::string range_path = temp_path("range.jsonl");
  write_file(range_path, "{\"text\":\"x\",\"label\":5}\n");
  CHECK_THROWS_WITH_AS(load_jsonl(range_path, 2),
                       doctest::Contains("label out of range at line 1"), std::runtime_error);

  const std::string broken_path = temp_path("broken.jsonl");
  write_file(broken_path, "{\"text\":\"ok\",\"label\":0}\nnot json at all\n");
  CHECK_THROWS_WITH_AS(load_jsonl(broken_path, 2), doctest::Contains("line 2"),
                       std::runtime_error);
}

TEST_CASE("save_jsonl round-trips labels, origins, and text") {
  Corpus corpus;
  corpus.n_classes = 3;
  corpus.examples.push_back({"plain one hot", {0.0, 1.0, 0.0}, Origin::Original});
  corpus.examples.push_back({"smoothed copy", {0.05, 0.9, 0.05}, Origin::Augmented});

  const std::string path = temp_path("roundtrip.jsonl");
  save_jsonl(path, corpus);
  const Corpus loaded = load_jsonl(path, 3);

  REQUIRE(loaded.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(loaded.examples[i].text == corpus.examples[i].text);
    CHECK(loaded.examples[i].origin == corpus.examples[i].origin);
    REQUIRE(loaded.examples[i].label.size() == 3);
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(loaded.examples[i].label[c] == corpus.examples[i].label[c]);
    }
  }
}

TEST_CASE("infer_n_classes scans labels and distributions") {
  const std::string path = temp_path("infer.jsonl");
  write_file(path, "{\"text\":\"a\",\"label\":0}\n{\"text\":\"b\",\"label\":4}\n");
  CHECK(infer_n_classes(path) == 5);
}

TEST_CASE("split_validation applies the ceil rule") {
  Corpus corpus;
  corpus.n_classes = 2;
  for (int i = 0; i < 10; ++i) {
    corpus.examples.push_back({"ex " + std::to_string(i), one_hot(i % 2, 2), Origin::Original});
  }
  const auto [train, val] = split_validation(corpus, 0.2, 7);
  CHECK(train.size() == 8);
  CHECK(val.size() == 2);

  Corpus two;
  two.n_classes = 2;
  two.examples.push_back({"a", one_hot(0, 2), Origin::Original});
  two.examples.push_back({"b", one_hot(1, 2), Origin::Original});
  const auto [t2, v2] = split_validation(two, 0.2, 7);
  CHECK(t2.size() == 1);
  CHECK(v2.size() == 1);
}

TEST_CASE("split_validation partitions deterministically") {
  Corpus corpus;
  corpus.n_classes = 2;
  for (int i = 0; i < 37; ++i) {
    corpus.examples.push_back({"ex " + std::to_string(i), one_hot(i % 2, 2), Origin::Original});
  }
  for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
    const auto [train_a, val_a] = split_validation(corpus, 0.2, seed);
    const auto [train_b, val_b] = split_validation(corpus, 0.2, seed);
    CHECK(texts(train_a) == texts(train_b));
    CHECK(texts(val_a) == texts(val_b));

    // Disjoint partition that preserves the multiset of examples.
    std::multiset<std::string> combined = texts(train_a);
    for (const auto& t : texts(val_a)) combined.insert(t);
    CHECK(combined == texts(corpus));
  }
}

TEST_CASE("split_validation rejects bad inputs") {
  Corpus tiny;
  tiny.n_classes = 2;
  tiny.examples.push_back({"only", one_hot(0, 2), Origin::Original});
  CHECK_THROWS_AS(split_validation(tiny, 0.2, 1), std::invalid_argument);

  Corpus pair = tiny;
  pair.examples.push_back({"second", one_hot(1, 2), Origin::Original});
  CHECK_THROWS_AS(split_validation(pair, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(split_validation(pair, 1.0, 1), std::invalid_argument);
}

TEST_CASE("build_vocab orders by frequency then lexicographically") {
  Corpus corpus;
  corpus.n_classes = 2;
  corpus.examples.push_back({"a a b", one_hot(0, 2), Origin::Original});

  const Vocab vocab = build_vocab(corpus, 1);
  CHECK(vocab.size() == 4);
  CHECK(vocab.id("a") == 2);
  CHECK(vocab.id("b") == 3);
  CHECK(vocab.token(0) == Vocab::kPadToken);
  CHECK(vocab.token(1) == Vocab::kUnkToken);

  CHECK(build_vocab(corpus, 3).size() == 2);  // nothing qualifies

  Corpus tie;
  tie.n_classes = 2;
  tie.examples.push_back({"b a b a", one_hot(0, 2), Origin::Original});
  const Vocab tied = build_vocab(tie, 1);
  CHECK(tied.id("a") == 2);  // equal frequency, lexicographic tie-break
  CHECK(tied.id("b") == 3);
}

TEST_CASE("vocab files round-trip") {
  Corpus corpus;
  corpus.n_classes = 2;
  corpus.examples.push_back({"one two three two", one_hot(0, 2), Origin::Original});
  const Vocab vocab = build_vocab(corpus, 1);

  const std::string path = temp_path("vocab.txt");
  save_vocab(path, vocab);
  const Vocab loaded = load_vocab(path);
  REQUIRE(loaded.size() == vocab.size());
  for (std::size_t id = 0; id < vocab.size(); ++id) {
    CHECK(loaded.token(static_cast<std::int32_t>(id)) ==
          vocab.token(static_cast<std::int32_t>(id)));
  }
}

TEST_CASE("dataset registry matches the published benchmark table") {
  const std::map<std::string, std::tuple<std::string, std::size_t, std::size_t, std::size_t>>
      expected = {
          {"SST2", {"Sentiment", 2, 6919, 1820}}, {"CR", {"Sentiment", 2, 3011, 752}},
          {"MR", {"Sentiment", 2, 9593, 1067}},   {"TREC", {"Question Type", 6, 5452, 500}},
          {"SUBJ", {"Subjectivity", 2, 8000, 2000}}, {"PC", {"Pro-Con", 2, 39418, 4506}},
          {"CoLA", {"Linguistic Acceptability", 2, 8551, 527}},
      };
  CHECK(dataset_registry().size() == expected.size());
  for (const auto& [name, row] : expected) {
    const DatasetSpec spec = describe_dataset(name);
    CHECK(spec.task == std::get<0>(row));
    CHECK(spec.n_classes == std::get<1>(row));
    CHECK(spec.n_train == std::get<2>(row));
    CHECK(spec.n_test == std::get<3>(row));
  }
  CHECK_THROWS_WITH_AS(describe_dataset("IMDB"), doctest::Contains("TREC"),
                       std::invalid_argument);
}

TEST_CASE("encode_batch pads, truncates, and maps unknowns") {
  Corpus corpus;
  corpus.n_classes = 2;
  corpus.examples.push_back({"aa bb", one_hot(1, 2), Origin::Original});
  const Vocab vocab = build_vocab(corpus, 1);

  Example ex{"aa bb", one_hot(1, 2), Origin::Original};
  const Batch batch = encode_batch(vocab, std::span<const Example>{&ex, 1}, 4);
  REQUIRE(batch.rows == 1);
  REQUIRE(batch.max_len == 4);
  const auto row = batch.row(0);
  CHECK(row[0] == vocab.id("aa"));
  CHECK(row[1] == vocab.id("bb"));
  CHECK(row[2] == Vocab::kPadId);
  CHECK(row[3] == Vocab::kPadId);
  CHECK(batch.label(0)[1] == 1.0);

  // Truncation keeps the first max_len tokens.
  std::string long_text;
  for (int i = 0; i < 150; ++i) long_text += (i < 100 ? "aa " : "bb ");
  Example long_ex{long_text, one_hot(0, 2), Origin::Original};
  const Batch truncated = encode_batch(vocab, std::span<const Example>{&long_ex, 1}, 100);
  CHECK(truncated.max_len == 100);
  for (std::size_t t = 0; t < 100; ++t) CHECK(truncated.row(0)[t] == vocab.id("aa"));

  Example unseen{"aa mystery", one_hot(0, 2), Origin::Original};
  const Batch unk = encode_batch(vocab, std::span<const Example>{&unseen, 1}, 4);
  CHECK(unk.row(0)[1] == Vocab::kUnkId);
}

TEST_CASE("encode_batch ids always fall inside the vocabulary") {
  Rng rng(81);
  Corpus corpus;
  corpus.n_classes = 2;
  corpus.examples.push_back({"red green blue cyan magenta", one_hot(0, 2), Origin::Original});
  const Vocab vocab = build_vocab(corpus, 1);

  std::vector<Example> examples;
  const std::vector<std::string> words = {"red", "green", "puce", "blue", "xyzzy"};
  for (int i = 0; i < 50; ++i) {
    std::string text;
    const std::size_t len = 1 + rng.next_index(12);
    for (std::size_t t = 0; t < len; ++t) {
      if (!text.empty()) text += ' ';
      text += words[rng.next_index(words.size())];
    }
    examples.push_back({text, one_hot(i % 2, 2), Origin::Original});
  }
  const Batch batch = encode_batch(vocab, examples, 8);
  CHECK(batch.ids.size() == batch.rows * batch.max_len);
  for (std::int32_t id : batch.ids) {
    CHECK(id >= 0);
    CHECK(static_cast<std::size_t>(id) < vocab.size());
  }
}
