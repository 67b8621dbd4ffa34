#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "softaug/augment.hpp"
#include "softaug/data.hpp"
#include "softaug/lexicon.hpp"
#include "softaug/rng.hpp"

namespace {

using namespace softaug;

const std::vector<std::string>& sample_tokens() {
  static const std::vector<std::string> tokens = {
      "the", "large",  "river", "flows", "past",    "an",  "old",
      "bridge", "where", "people", "gather", "quickly", "every", "morning"};
  return tokens;
}

Corpus sample_corpus(std::size_t n) {
  Corpus corpus;
  corpus.n_classes = 6;
  corpus.name = "bench";
  const char* texts[] = {
      "what does the acronym stand for",
      "who invented the small telescope",
      "where is the old bridge located",
      "how many people live near the river",
      "what is the fastest animal in the world",
      "which country has the largest mountain",
  };
  for (std::size_t i = 0; i < n; ++i) {
    corpus.examples.push_back({texts[i % 6], one_hot(i % 6, 6), Origin::Original});
  }
  return corpus;
}

void BM_Tokenize(benchmark::State& state) {
  const std::string text = "What does the ACRONYM stand for, and who said so?";
  for (auto _ : state) {
    benchmark::DoNotOptimize(tokenize(text));
  }
}
BENCHMARK(BM_Tokenize);

void BM_SynonymReplacement(benchmark::State& state) {
  const auto& thesaurus = builtin_thesaurus();
  const auto& stopwords = builtin_stopwords();
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(synonym_replacement(sample_tokens(), 2, thesaurus, stopwords, rng));
  }
}
BENCHMARK(BM_SynonymReplacement);

void BM_RandomInsertion(benchmark::State& state) {
  const auto& thesaurus = builtin_thesaurus();
  const auto& stopwords = builtin_stopwords();
  Rng rng(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(random_insertion(sample_tokens(), 2, thesaurus, stopwords, rng));
  }
}
BENCHMARK(BM_RandomInsertion);

void BM_RandomSwap(benchmark::State& state) {
  Rng rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(random_swap(sample_tokens(), 2, rng));
  }
}
BENCHMARK(BM_RandomSwap);

void BM_RandomDeletion(benchmark::State& state) {
  Rng rng(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(random_deletion(sample_tokens(), 0.1, rng));
  }
}
BENCHMARK(BM_RandomDeletion);

void BM_AedaInsert(benchmark::State& state) {
  Rng rng(5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(aeda_insert(sample_tokens(), 1.0 / 3.0, rng));
  }
}
BENCHMARK(BM_AedaInsert);

void BM_AugmentCorpus(benchmark::State& state) {
  const Corpus corpus = sample_corpus(static_cast<std::size_t>(state.range(0)));
  AugmentPolicy policy;
  policy.method = AugmentMethod::SoftEda;
  policy.alpha = 0.15;
  policy.n_aug = 1;
  const auto& thesaurus = builtin_thesaurus();
  const auto& stopwords = builtin_stopwords();
  for (auto _ : state) {
    benchmark::DoNotOptimize(augment_corpus(corpus, policy, thesaurus, stopwords));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AugmentCorpus)->Arg(100)->Arg(1000);

}  // namespace
