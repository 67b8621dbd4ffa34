#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "softaug/labels.hpp"
#include "softaug/rng.hpp"

namespace softaug {

struct ModelConfig {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 32;
  std::vector<std::size_t> filter_widths = {3, 4, 5};
  std::size_t filters_per_width = 16;
  std::size_t n_classes = 0;
  double dropout_p = 0.2;
  std::size_t classifier_hidden = 64;
  std::size_t max_len = 100;

  std::size_t pooled_dim() const { return filter_widths.size() * filters_per_width; }
  void validate() const;
};

// Parameter tensors of the text CNN. The same layout is reused for
// gradients and optimizer moment accumulators.
struct ParamSet {
  std::vector<double> embedding;            // vocab_size x embed_dim, row 0 = padding
  std::vector<std::vector<double>> conv_w;  // per width: filters x (width*embed_dim)
  std::vector<std::vector<double>> conv_b;  // per width: filters
  std::vector<double> hidden_w;             // hidden x pooled_dim
  std::vector<double> hidden_b;             // hidden
  std::vector<double> out_w;                // n_classes x hidden
  std::vector<double> out_b;                // n_classes

  static ParamSet zeros(const ModelConfig& cfg);
  void fill(double value);
  void scale(double factor);
};

// Flat views over every tensor in a fixed order (embedding first); lets
// the optimizer and gradient checks walk parameters generically.
std::vector<std::span<double>> tensor_views(ParamSet& params);
std::vector<std::span<const double>> tensor_views(const ParamSet& params);

struct Model {
  ModelConfig cfg;
  ParamSet params;
};

// Uniform [-a, a] init with a = sqrt(6/(fan_in+fan_out)) per layer; biases
// and the padding embedding row are zero. Deterministic under seed.
Model init_model(const ModelConfig& cfg, std::uint64_t seed);

// Exact erf-based x * Phi(x) and its derivative.
double gelu(double x);
double gelu_grad(double x);

// Numerically stabilized softmax (max subtraction).
std::vector<double> softmax(std::span<const double> logits);

// -sum_i target_i * log softmax(logits)_i.
double soft_cross_entropy(std::span<const double> logits, std::span<const double> target);

// Activations recorded by forward for the matching backward call.
struct ForwardCache {
  std::size_t len = 0;                   // non-padding prefix length
  std::vector<std::int32_t> token_ids;   // the len real token ids
  std::vector<double> embedded;          // len x embed_dim
  std::vector<std::size_t> argmax_pos;   // pooled_dim entries; npos when len == 0
  std::vector<double> pooled;            // pooled_dim, pre-dropout
  std::vector<double> dropout_scale;     // pooled_dim; empty in eval mode
  std::vector<double> dropped;           // pooled after dropout
  std::vector<double> hidden_pre;        // classifier_hidden
  std::vector<double> hidden_act;        // gelu(hidden_pre)
  std::vector<double> logits;            // n_classes

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct ForwardResult {
  std::vector<double> logits;
  ForwardCache cache;
};

// Row must be max_len ids, real tokens first, padding (id 0) after.
// Padding contributes nothing: windows past the real prefix are skipped
// and an all-padding row pools to the convolution biases. Dropout draws
// from rng only when train_mode is set; eval mode is deterministic.
ForwardResult forward(const Model& model, std::span<const std::int32_t> row, bool train_mode,
                      Rng* dropout_rng);

// Accumulates d loss / d params into grad_acc (zero it per batch). The
// padding embedding row never receives gradient.
void backward(const Model& model, const ForwardCache& cache, std::span<const double> target,
              ParamSet& grad_acc);

struct OptState {
  double lr = 1e-4;
  double weight_decay = 1e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t step = 0;
  ParamSet m;  // first moment
  ParamSet v;  // second moment

  static OptState init(const ModelConfig& cfg, double lr = 1e-4, double weight_decay = 1e-5);
};

// AdamW: bias-corrected moment step, then decoupled weight decay
// (param -= lr * wd * param). The padding embedding row is left untouched.
void adamw_step(Model& model, const ParamSet& grads, OptState& state);

// Versioned binary checkpoint: config plus all tensors row-major
// (see docs/checkpoint_format.md). Round-trips parameters bit-exactly.
void save_model(const std::string& path, const Model& model);
Model load_model(const std::string& path);

}  // namespace softaug
