#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "softaug/model.hpp"
#include "softaug/rng.hpp"

namespace {

using namespace softaug;

ModelConfig stock_config() {
  ModelConfig cfg;
  cfg.vocab_size = 2000;
  cfg.n_classes = 6;
  return cfg;  // 32-dim embeddings, 3/4/5-wide filters, 16 each, hidden 64
}

std::vector<std::int32_t> sample_row(const ModelConfig& cfg, std::size_t len) {
  Rng rng(7);
  std::vector<std::int32_t> row(cfg.max_len, 0);
  for (std::size_t t = 0; t < len; ++t) {
    row[t] = static_cast<std::int32_t>(2 + rng.next_index(cfg.vocab_size - 2));
  }
  return row;
}

void BM_ForwardEval(benchmark::State& state) {
  const ModelConfig cfg = stock_config();
  const Model model = init_model(cfg, 1);
  const auto row = sample_row(cfg, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward(model, row, false, nullptr));
  }
}
BENCHMARK(BM_ForwardEval)->Arg(8)->Arg(32)->Arg(100);

void BM_ForwardTrain(benchmark::State& state) {
  const ModelConfig cfg = stock_config();
  const Model model = init_model(cfg, 1);
  const auto row = sample_row(cfg, 16);
  Rng dropout_rng(9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward(model, row, true, &dropout_rng));
  }
}
BENCHMARK(BM_ForwardTrain);

void BM_ForwardBackward(benchmark::State& state) {
  const ModelConfig cfg = stock_config();
  const Model model = init_model(cfg, 1);
  const auto row = sample_row(cfg, 16);
  const LabelVector target = one_hot(2, cfg.n_classes);
  ParamSet grads = ParamSet::zeros(cfg);
  Rng dropout_rng(9);
  for (auto _ : state) {
    grads.fill(0.0);
    const ForwardResult fwd = forward(model, row, true, &dropout_rng);
    backward(model, fwd.cache, target, grads);
    benchmark::DoNotOptimize(grads);
  }
}
BENCHMARK(BM_ForwardBackward);

void BM_AdamwStep(benchmark::State& state) {
  const ModelConfig cfg = stock_config();
  Model model = init_model(cfg, 1);
  OptState opt = OptState::init(cfg);
  ParamSet grads = ParamSet::zeros(cfg);
  grads.fill(1e-3);
  for (auto _ : state) {
    adamw_step(model, grads, opt);
    benchmark::DoNotOptimize(model);
  }
}
BENCHMARK(BM_AdamwStep);

}  // namespace
