#include "softaug/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace softaug {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

void ModelConfig::validate() const {
  if (vocab_size < 2) throw std::invalid_argument("model: vocab_size must be >= 2");
  if (embed_dim == 0) throw std::invalid_argument("model: embed_dim must be positive");
  if (filter_widths.empty()) throw std::invalid_argument("model: no filter widths");
  for (std::size_t w : filter_widths) {
    if (w == 0) throw std::invalid_argument("model: filter width must be positive");
    if (w > max_len) throw std::invalid_argument("model: max_len must cover every filter width");
  }
  if (filters_per_width == 0) throw std::invalid_argument("model: filters_per_width must be positive");
  if (n_classes < 2) throw std::invalid_argument("model: n_classes must be >= 2");
  if (!(dropout_p >= 0.0 && dropout_p < 1.0)) {
    throw std::invalid_argument("model: dropout_p must be in [0,1)");
  }
  if (classifier_hidden == 0) throw std::invalid_argument("model: classifier_hidden must be positive");
  if (max_len == 0) throw std::invalid_argument("model: max_len must be positive");
}

ParamSet ParamSet::zeros(const ModelConfig& cfg) {
  ParamSet p;
  p.embedding.assign(cfg.vocab_size * cfg.embed_dim, 0.0);
  p.conv_w.resize(cfg.filter_widths.size());
  p.conv_b.resize(cfg.filter_widths.size());
  for (std::size_t wi = 0; wi < cfg.filter_widths.size(); ++wi) {
    p.conv_w[wi].assign(cfg.filters_per_width * cfg.filter_widths[wi] * cfg.embed_dim, 0.0);
    p.conv_b[wi].assign(cfg.filters_per_width, 0.0);
  }
  p.hidden_w.assign(cfg.classifier_hidden * cfg.pooled_dim(), 0.0);
  p.hidden_b.assign(cfg.classifier_hidden, 0.0);
  p.out_w.assign(cfg.n_classes * cfg.classifier_hidden, 0.0);
  p.out_b.assign(cfg.n_classes, 0.0);
  return p;
}

void ParamSet::fill(double value) {
  for (auto view : tensor_views(*this)) std::fill(view.begin(), view.end(), value);
}

void ParamSet::scale(double factor) {
  for (auto view : tensor_views(*this)) {
    for (double& x : view) x *= factor;
  }
}

std::vector<std::span<double>> tensor_views(ParamSet& params) {
  std::vector<std::span<double>> views;
  views.emplace_back(params.embedding);
  for (auto& w : params.conv_w) views.emplace_back(w);
  for (auto& b : params.conv_b) views.emplace_back(b);
  views.emplace_back(params.hidden_w);
  views.emplace_back(params.hidden_b);
  views.emplace_back(params.out_w);
  views.emplace_back(params.out_b);
  return views;
}

std::vector<std::span<const double>> tensor_views(const ParamSet& params) {
  std::vector<std::span<const double>> views;
  views.emplace_back(params.embedding);
  for (const auto& w : params.conv_w) views.emplace_back(w);
  for (const auto& b : params.conv_b) views.emplace_back(b);
  views.emplace_back(params.hidden_w);
  views.emplace_back(params.hidden_b);
  views.emplace_back(params.out_w);
  views.emplace_back(params.out_b);
  return views;
}

Model init_model(const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Model model{cfg, ParamSet::zeros(cfg)};
  Rng rng(seed);

  auto fill_uniform = [&rng](std::span<double> dst, double bound) {
    for (double& x : dst) x = rng.next_uniform(-bound, bound);
  };

  const double d = static_cast<double>(cfg.embed_dim);
  // Embedding row 0 is the padding row: kept at zero and frozen.
  const double embed_bound =
      std::sqrt(6.0 / (static_cast<double>(cfg.vocab_size) + d));
  fill_uniform({model.params.embedding.data() + cfg.embed_dim,
                (cfg.vocab_size - 1) * cfg.embed_dim},
               embed_bound);

  for (std::size_t wi = 0; wi < cfg.filter_widths.size(); ++wi) {
    const double w = static_cast<double>(cfg.filter_widths[wi]);
    const double conv_bound =
        std::sqrt(6.0 / (w * d + w * static_cast<double>(cfg.filters_per_width)));
    fill_uniform(model.params.conv_w[wi], conv_bound);
  }

  const double hidden_bound = std::sqrt(
      6.0 / (static_cast<double>(cfg.pooled_dim()) + static_cast<double>(cfg.classifier_hidden)));
  fill_uniform(model.params.hidden_w, hidden_bound);

  const double out_bound = std::sqrt(
      6.0 / (static_cast<double>(cfg.classifier_hidden) + static_cast<double>(cfg.n_classes)));
  fill_uniform(model.params.out_w, out_bound);

  return model;
}

double gelu(double x) {
  return x * 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0);
}

double gelu_grad(double x) {
  constexpr double inv_sqrt_2pi = std::numbers::inv_sqrtpi / std::numbers::sqrt2;
  const double cdf = 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0);
  const double pdf = inv_sqrt_2pi * std::exp(-0.5 * x * x);
  return cdf + x * pdf;
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("softmax: empty logits");
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max_logit);
    sum += out[i];
  }
  for (double& x : out) x /= sum;
  return out;
}

double soft_cross_entropy(std::span<const double> logits, std::span<const double> target) {
  if (logits.size() != target.size()) {
    throw std::invalid_argument("soft_cross_entropy: size mismatch");
  }
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  double sum_exp = 0.0;
  for (double l : logits) sum_exp += std::exp(l - max_logit);
  const double log_sum_exp = max_logit + std::log(sum_exp);
  double loss = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    loss += target[i] * (log_sum_exp - logits[i]);
  }
  return loss;
}

ForwardResult forward(const Model& model, std::span<const std::int32_t> row, bool train_mode,
                      Rng* dropout_rng) {
  const ModelConfig& cfg = model.cfg;
  if (row.size() != cfg.max_len) {
    throw std::invalid_argument("forward: row length must equal max_len");
  }
  if (train_mode && cfg.dropout_p > 0.0 && dropout_rng == nullptr) {
    throw std::invalid_argument("forward: train mode needs an rng for dropout");
  }

  ForwardCache cache;
  std::size_t len = 0;
  while (len < cfg.max_len && row[len] != 0) {
    const std::int32_t id = row[len];
    if (id < 0 || static_cast<std::size_t>(id) >= cfg.vocab_size) {
      throw std::out_of_range("forward: token id " + std::to_string(id) +
                              " outside vocab of size " + std::to_string(cfg.vocab_size));
    }
    ++len;
  }
  cache.len = len;
  cache.token_ids.assign(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(len));

  const std::size_t d = cfg.embed_dim;
  cache.embedded.resize(len * d);
  for (std::size_t t = 0; t < len; ++t) {
    const double* src =
        model.params.embedding.data() + static_cast<std::size_t>(row[t]) * d;
    std::copy(src, src + d, cache.embedded.begin() + t * d);
  }

  const std::size_t n_filters = cfg.filters_per_width;
  cache.pooled.assign(cfg.pooled_dim(), 0.0);
  cache.argmax_pos.assign(cfg.pooled_dim(), ForwardCache::npos);
  for (std::size_t wi = 0; wi < cfg.filter_widths.size(); ++wi) {
    const std::size_t width = cfg.filter_widths[wi];
    const auto& kernel = model.params.conv_w[wi];
    const auto& bias = model.params.conv_b[wi];
    double* pooled = cache.pooled.data() + wi * n_filters;
    std::size_t* best_pos = cache.argmax_pos.data() + wi * n_filters;

    if (len == 0) {
      // All-padding input: pool over a single all-zero window.
      for (std::size_t f = 0; f < n_filters; ++f) pooled[f] = bias[f];
      continue;
    }
    // Windows whose positions are entirely padding are masked out; a
    // window straddling the boundary reads zeros past the prefix.
    const std::size_t n_windows = std::min(len, cfg.max_len - width + 1);
    for (std::size_t f = 0; f < n_filters; ++f) {
      pooled[f] = -std::numeric_limits<double>::infinity();
    }
    for (std::size_t p = 0; p < n_windows; ++p) {
      const double* window = cache.embedded.data() + p * d;
      const std::size_t n_terms = std::min(width, len - p) * d;
      for (std::size_t f = 0; f < n_filters; ++f) {
        const double* k = kernel.data() + f * width * d;
        double acc = bias[f];
        for (std::size_t i = 0; i < n_terms; ++i) acc += k[i] * window[i];
        if (acc > pooled[f]) {
          pooled[f] = acc;
          best_pos[f] = p;
        }
      }
    }
  }

  const std::size_t pooled_dim = cfg.pooled_dim();
  if (train_mode && cfg.dropout_p > 0.0) {
    // Inverted dropout: kept units scale by 1/(1-p).
    const double keep_scale = 1.0 / (1.0 - cfg.dropout_p);
    cache.dropout_scale.resize(pooled_dim);
    cache.dropped.resize(pooled_dim);
    for (std::size_t i = 0; i < pooled_dim; ++i) {
      const double scale = dropout_rng->next_bernoulli(cfg.dropout_p) ? 0.0 : keep_scale;
      cache.dropout_scale[i] = scale;
      cache.dropped[i] = cache.pooled[i] * scale;
    }
  } else {
    cache.dropped = cache.pooled;
  }

  const std::size_t hidden = cfg.classifier_hidden;
  cache.hidden_pre.resize(hidden);
  cache.hidden_act.resize(hidden);
  for (std::size_t j = 0; j < hidden; ++j) {
    const double* w = model.params.hidden_w.data() + j * pooled_dim;
    double acc = model.params.hidden_b[j];
    for (std::size_t i = 0; i < pooled_dim; ++i) acc += w[i] * cache.dropped[i];
    cache.hidden_pre[j] = acc;
    cache.hidden_act[j] = gelu(acc);
  }

  cache.logits.resize(cfg.n_classes);
  for (std::size_t c = 0; c < cfg.n_classes; ++c) {
    const double* w = model.params.out_w.data() + c * hidden;
    double acc = model.params.out_b[c];
    for (std::size_t j = 0; j < hidden; ++j) acc += w[j] * cache.hidden_act[j];
    cache.logits[c] = acc;
  }

  ForwardResult result;
  result.logits = cache.logits;
  result.cache = std::move(cache);
  return result;
}

void backward(const Model& model, const ForwardCache& cache, std::span<const double> target,
              ParamSet& grad_acc) {
  const ModelConfig& cfg = model.cfg;
  if (target.size() != cfg.n_classes) {
    throw std::invalid_argument("backward: target width must equal n_classes");
  }

  // d loss / d logits = softmax(logits) - target.
  std::vector<double> dlogits = softmax(cache.logits);
  for (std::size_t c = 0; c < cfg.n_classes; ++c) dlogits[c] -= target[c];

  const std::size_t hidden = cfg.classifier_hidden;
  const std::size_t pooled_dim = cfg.pooled_dim();

  std::vector<double> dhidden(hidden, 0.0);
  for (std::size_t c = 0; c < cfg.n_classes; ++c) {
    const double g = dlogits[c];
    double* gw = grad_acc.out_w.data() + c * hidden;
    const double* w = model.params.out_w.data() + c * hidden;
    for (std::size_t j = 0; j < hidden; ++j) {
      gw[j] += g * cache.hidden_act[j];
      dhidden[j] += g * w[j];
    }
    grad_acc.out_b[c] += g;
  }

  std::vector<double> ddropped(pooled_dim, 0.0);
  for (std::size_t j = 0; j < hidden; ++j) {
    const double g = dhidden[j] * gelu_grad(cache.hidden_pre[j]);
    double* gw = grad_acc.hidden_w.data() + j * pooled_dim;
    const double* w = model.params.hidden_w.data() + j * pooled_dim;
    for (std::size_t i = 0; i < pooled_dim; ++i) {
      gw[i] += g * cache.dropped[i];
      ddropped[i] += g * w[i];
    }
    grad_acc.hidden_b[j] += g;
  }

  const std::size_t d = cfg.embed_dim;
  const std::size_t n_filters = cfg.filters_per_width;
  for (std::size_t wi = 0; wi < cfg.filter_widths.size(); ++wi) {
    const std::size_t width = cfg.filter_widths[wi];
    const auto& kernel = model.params.conv_w[wi];
    auto& gkernel = grad_acc.conv_w[wi];
    auto& gbias = grad_acc.conv_b[wi];
    for (std::size_t f = 0; f < n_filters; ++f) {
      const std::size_t unit = wi * n_filters + f;
      double g = ddropped[unit];
      if (!cache.dropout_scale.empty()) g *= cache.dropout_scale[unit];
      if (g == 0.0) continue;
      gbias[f] += g;
      const std::size_t p = cache.argmax_pos[unit];
      if (p == ForwardCache::npos) continue;  // all-padding row: bias only
      // Max pooling routes the gradient through the argmax window alone.
      const std::size_t n_terms = std::min(width, cache.len - p) * d;
      const double* window = cache.embedded.data() + p * d;
      const double* k = kernel.data() + f * width * d;
      double* gk = gkernel.data() + f * width * d;
      for (std::size_t i = 0; i < n_terms; ++i) gk[i] += g * window[i];
      for (std::size_t t = 0; p + t < cache.len && t < width; ++t) {
        double* ge = grad_acc.embedding.data() +
                     static_cast<std::size_t>(cache.token_ids[p + t]) * d;
        const double* kt = k + t * d;
        for (std::size_t e = 0; e < d; ++e) ge[e] += g * kt[e];
      }
    }
  }
}

OptState OptState::init(const ModelConfig& cfg, double lr, double weight_decay) {
  OptState state;
  state.lr = lr;
  state.weight_decay = weight_decay;
  state.m = ParamSet::zeros(cfg);
  state.v = ParamSet::zeros(cfg);
  return state;
}

void adamw_step(Model& model, const ParamSet& grads, OptState& state) {
  state.step += 1;
  const double bias1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bias2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));

  auto params = tensor_views(model.params);
  auto grad_views = tensor_views(grads);
  auto m_views = tensor_views(state.m);
  auto v_views = tensor_views(state.v);

  for (std::size_t t = 0; t < params.size(); ++t) {
    // Tensor 0 is the embedding; its first row (padding) stays frozen.
    const std::size_t start = t == 0 ? model.cfg.embed_dim : 0;
    auto p = params[t];
    auto g = grad_views[t];
    auto m = m_views[t];
    auto v = v_views[t];
    if (p.size() != g.size() || p.size() != m.size() || p.size() != v.size()) {
      throw std::invalid_argument("adamw_step: tensor shape mismatch");
    }
    for (std::size_t i = start; i < p.size(); ++i) {
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
      const double m_hat = m[i] / bias1;
      const double v_hat = v[i] / bias2;
      p[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
      p[i] -= state.lr * state.weight_decay * p[i];
    }
  }
}

namespace {

constexpr char kMagic[4] = {'S', 'A', 'U', 'G'};
constexpr std::uint32_t kVersion = 1;

void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_f64(std::ostream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

double read_f64(std::istream& in) {
  double v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

}  // namespace

void save_model(const std::string& path, const Model& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open checkpoint file for writing: " + path);
  out.write(kMagic, sizeof(kMagic));
  const std::uint32_t version = kVersion;
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));

  const ModelConfig& cfg = model.cfg;
  write_u64(out, cfg.vocab_size);
  write_u64(out, cfg.embed_dim);
  write_u64(out, cfg.filter_widths.size());
  write_u64(out, cfg.filters_per_width);
  write_u64(out, cfg.n_classes);
  write_u64(out, cfg.classifier_hidden);
  write_u64(out, cfg.max_len);
  write_f64(out, cfg.dropout_p);
  for (std::size_t w : cfg.filter_widths) write_u64(out, w);

  for (auto view : tensor_views(model.params)) {
    out.write(reinterpret_cast<const char*>(view.data()),
              static_cast<std::streamsize>(view.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("failed writing checkpoint: " + path);
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint file: " + path);
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error(path + ": not a model checkpoint");
  }
  std::uint32_t version = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  if (version != kVersion) {
    throw std::runtime_error(path + ": unsupported checkpoint version " +
                             std::to_string(version));
  }

  ModelConfig cfg;
  cfg.vocab_size = read_u64(in);
  cfg.embed_dim = read_u64(in);
  const std::uint64_t n_widths = read_u64(in);
  cfg.filters_per_width = read_u64(in);
  cfg.n_classes = read_u64(in);
  cfg.classifier_hidden = read_u64(in);
  cfg.max_len = read_u64(in);
  cfg.dropout_p = read_f64(in);
  cfg.filter_widths.resize(n_widths);
  for (auto& w : cfg.filter_widths) w = read_u64(in);
  if (!in) throw std::runtime_error(path + ": truncated checkpoint header");
  cfg.validate();

  Model model{cfg, ParamSet::zeros(cfg)};
  for (auto view : tensor_views(model.params)) {
    in.read(reinterpret_cast<char*>(view.data()),
            static_cast<std::streamsize>(view.size() * sizeof(double)));
  }
  if (!in) throw std::runtime_error(path + ": truncated checkpoint tensors");
  return model;
}

}  // namespace softaug
