#include "softaug/train.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "softaug/rng.hpp"

namespace softaug {

void TrainConfig::validate() const {
  if (batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  if (patience < 1) throw std::invalid_argument("train: patience must be >= 1");
  if (max_epochs < 1) throw std::invalid_argument("train: max_epochs must be >= 1");
  if (!(lr > 0.0)) throw std::invalid_argument("train: lr must be positive");
  if (weight_decay < 0.0) throw std::invalid_argument("train: weight_decay must be >= 0");
}

EarlyStopping::EarlyStopping(std::size_t patience) : patience_(patience) {
  if (patience < 1) throw std::invalid_argument("early stopping: patience must be >= 1");
}

bool EarlyStopping::observe(double val_loss) {
  const std::size_t index = n_observed_++;
  if (val_loss < best_loss_) {
    best_loss_ = val_loss;
    best_index_ = index;
    since_best_ = 0;
    return true;
  }
  ++since_best_;
  return false;
}

bool EarlyStopping::should_stop() const { return since_best_ >= patience_; }

namespace {

std::size_t argmax_span(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax of empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

struct EvalOutcome {
  double mean_loss = 0.0;
  std::vector<std::size_t> predictions;
  std::vector<std::size_t> truths;
};

EvalOutcome eval_pass(const Model& model, const Batch& batch) {
  EvalOutcome out;
  out.predictions.reserve(batch.rows);
  out.truths.reserve(batch.rows);
  double loss_sum = 0.0;
  for (std::size_t r = 0; r < batch.rows; ++r) {
    const ForwardResult fwd = forward(model, batch.row(r), /*train_mode=*/false, nullptr);
    loss_sum += soft_cross_entropy(fwd.logits, batch.label(r));
    out.predictions.push_back(argmax_span(fwd.logits));
    out.truths.push_back(argmax_span(batch.label(r)));
  }
  out.mean_loss = loss_sum / static_cast<double>(batch.rows);
  return out;
}

}  // namespace

TrainResult train(const Model& model, const Corpus& train_corpus, const Corpus& val_corpus,
                  const Vocab& vocab, const TrainConfig& tcfg) {
  tcfg.validate();
  if (train_corpus.empty()) throw std::invalid_argument("train: empty training corpus");
  if (val_corpus.empty()) throw std::invalid_argument("train: empty validation corpus");

  const ModelConfig& cfg = model.cfg;
  // Label widths are checked before any parameter update.
  for (const Corpus* corpus : {&train_corpus, &val_corpus}) {
    for (const Example& ex : corpus->examples) {
      if (ex.label.size() != cfg.n_classes) {
        throw std::invalid_argument("train: label width " + std::to_string(ex.label.size()) +
                                    " does not match model n_classes " +
                                    std::to_string(cfg.n_classes));
      }
    }
  }

  const Batch train_batch = encode_batch(vocab, train_corpus.examples, cfg.max_len);
  const Batch val_batch = encode_batch(vocab, val_corpus.examples, cfg.max_len);
  const std::size_t n = train_batch.rows;

  Model current{cfg, model.params};
  OptState opt = OptState::init(cfg, tcfg.lr, tcfg.weight_decay);
  EarlyStopping stopper(tcfg.patience);
  ParamSet best_params = current.params;

  TrainResult result;
  result.history.stop_reason = StopReason::MaxEpochs;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  ParamSet grads = ParamSet::zeros(cfg);

  for (std::size_t epoch = 1; epoch <= tcfg.max_epochs; ++epoch) {
    // Separate keyed streams per epoch keep batch order and dropout masks
    // independent of each other and reproducible under resume.
    if (tcfg.shuffle) {
      std::iota(order.begin(), order.end(), 0);
      Rng shuffle_rng = Rng::keyed(tcfg.seed, epoch, 0);
      shuffle_rng.shuffle(order);
    }
    Rng dropout_rng = Rng::keyed(tcfg.seed, epoch, 1);

    double train_loss_sum = 0.0;
    for (std::size_t start = 0; start < n; start += tcfg.batch_size) {
      const std::size_t stop = std::min(n, start + tcfg.batch_size);
      grads.fill(0.0);
      for (std::size_t k = start; k < stop; ++k) {
        const std::size_t r = order[k];
        const ForwardResult fwd =
            forward(current, train_batch.row(r), /*train_mode=*/true, &dropout_rng);
        train_loss_sum += soft_cross_entropy(fwd.logits, train_batch.label(r));
        backward(current, fwd.cache, train_batch.label(r), grads);
      }
      grads.scale(1.0 / static_cast<double>(stop - start));
      adamw_step(current, grads, opt);
    }

    const EvalOutcome val = eval_pass(current, val_batch);
    double correct = 0.0;
    for (std::size_t r = 0; r < val.predictions.size(); ++r) {
      if (val.predictions[r] == val.truths[r]) correct += 1.0;
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = train_loss_sum / static_cast<double>(n);
    stats.val_loss = val.mean_loss;
    stats.val_accuracy = correct / static_cast<double>(val.predictions.size());
    result.history.epochs.push_back(stats);

    if (stopper.observe(stats.val_loss)) {
      best_params = current.params;
    }
    if (stopper.should_stop()) {
      result.history.stop_reason = StopReason::EarlyStopped;
      break;
    }
  }

  result.history.best_epoch = stopper.best_index() + 1;
  result.model = Model{cfg, std::move(best_params)};
  return result;
}

Metrics compute_metrics(const std::vector<std::size_t>& predictions,
                        const std::vector<std::size_t>& truths, std::size_t n_classes,
                        double mean_loss) {
  if (predictions.size() != truths.size()) {
    throw std::invalid_argument("metrics: prediction/truth size mismatch");
  }
  if (predictions.empty()) throw std::invalid_argument("metrics: empty inputs");
  if (n_classes < 1) throw std::invalid_argument("metrics: n_classes must be >= 1");

  std::vector<double> tp(n_classes, 0.0), fp(n_classes, 0.0), fn(n_classes, 0.0);
  double correct = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const std::size_t p = predictions[i];
    const std::size_t t = truths[i];
    if (p >= n_classes || t >= n_classes) {
      throw std::out_of_range("metrics: class index outside [0, n_classes)");
    }
    if (p == t) {
      correct += 1.0;
      tp[p] += 1.0;
    } else {
      fp[p] += 1.0;
      fn[t] += 1.0;
    }
  }

  Metrics metrics;
  metrics.loss = mean_loss;
  metrics.accuracy = correct / static_cast<double>(predictions.size());
  metrics.per_class_f1.resize(n_classes, 0.0);
  double f1_sum = 0.0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    const double denom = 2.0 * tp[c] + fp[c] + fn[c];
    // Classes with neither support nor predictions contribute F1 = 0.
    const double f1 = denom > 0.0 ? 2.0 * tp[c] / denom : 0.0;
    metrics.per_class_f1[c] = f1;
    f1_sum += f1;
  }
  metrics.macro_f1 = f1_sum / static_cast<double>(n_classes);
  return metrics;
}

Metrics evaluate(const Model& model, const Corpus& corpus, const Vocab& vocab) {
  if (corpus.empty()) throw std::invalid_argument("evaluate: empty corpus");
  const Batch batch = encode_batch(vocab, corpus.examples, model.cfg.max_len);
  if (batch.n_classes != model.cfg.n_classes) {
    throw std::invalid_argument("evaluate: label width does not match model n_classes");
  }
  const EvalOutcome out = eval_pass(model, batch);
  return compute_metrics(out.predictions, out.truths, model.cfg.n_classes, out.mean_loss);
}

void save_history_csv(const std::string& path, const RunHistory& history) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open history file for writing: " + path);
  out << "epoch,train_loss,val_loss,val_acc\n";
  char line[160];
  for (const EpochStats& e : history.epochs) {
    std::snprintf(line, sizeof(line), "%zu,%.6f,%.6f,%.6f\n", e.epoch, e.train_loss, e.val_loss,
                  e.val_accuracy);
    out << line;
  }
  if (!out) throw std::runtime_error("failed writing history file: " + path);
}

}  // namespace softaug
