#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "softaug/data.hpp"
#include "softaug/model.hpp"

namespace softaug {

struct TrainConfig {
  std::size_t batch_size = 32;
  std::size_t patience = 5;
  std::size_t max_epochs = 100;
  std::uint64_t seed = 0;
  bool shuffle = true;
  double lr = 1e-4;
  double weight_decay = 1e-5;

  void validate() const;
};

struct Metrics {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::vector<double> per_class_f1;
  double loss = 0.0;
};

enum class StopReason { EarlyStopped, MaxEpochs };

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
};

struct RunHistory {
  std::vector<EpochStats> epochs;
  std::size_t best_epoch = 0;  // 1-based index into the epoch sequence
  StopReason stop_reason = StopReason::MaxEpochs;
};

// Tracks the best validation loss seen so far; only strict improvement
// resets the patience counter, and ties keep the earliest epoch.
class EarlyStopping {
 public:
  explicit EarlyStopping(std::size_t patience);

  // Records one epoch's validation loss; returns true when it is a new best.
  bool observe(double val_loss);
  [[nodiscard]] bool should_stop() const;
  [[nodiscard]] std::size_t best_index() const { return best_index_; }
  [[nodiscard]] double best_loss() const { return best_loss_; }

 private:
  std::size_t patience_;
  std::size_t since_best_ = 0;
  std::size_t n_observed_ = 0;
  std::size_t best_index_ = 0;  // 0-based
  double best_loss_ = std::numeric_limits<double>::infinity();
};

struct TrainResult {
  Model model;  // snapshot from the best-validation-loss epoch
  RunHistory history;
};

// Runs mini-batch AdamW training with per-epoch shuffling and early
// stopping on validation loss. The returned model is the best snapshot,
// not the final-epoch parameters. Deterministic for a fixed config/seed.
TrainResult train(const Model& model, const Corpus& train_corpus, const Corpus& val_corpus,
                  const Vocab& vocab, const TrainConfig& tcfg);

// Computes accuracy / macro-F1 / mean loss from predictions and argmax'd
// truth labels. Classes with no support and no predictions score F1 = 0.
Metrics compute_metrics(const std::vector<std::size_t>& predictions,
                        const std::vector<std::size_t>& truths, std::size_t n_classes,
                        double mean_loss);

// Eval-mode forward over the corpus; accuracy against the argmax of each
// stored label distribution, loss as mean soft cross-entropy.
Metrics evaluate(const Model& model, const Corpus& corpus, const Vocab& vocab);

// CSV with header epoch,train_loss,val_loss,val_acc — one row per epoch.
void save_history_csv(const std::string& path, const RunHistory& history);

}  // namespace softaug
