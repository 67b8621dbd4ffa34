#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "softaug/augment.hpp"
#include "softaug/data.hpp"
#include "softaug/model.hpp"
#include "softaug/train.hpp"

namespace softaug {

// Declarative description of one comparison sweep: which augmentation
// methods to run against which smoothing values and seeds, plus the model
// and training settings shared by every run.
struct ExperimentConfig {
  std::string dataset_name = "dataset";
  std::string train_path;
  std::string test_path;
  std::size_t n_classes = 0;  // 0 = infer from the training file

  std::vector<AugmentMethod> methods = {AugmentMethod::None, AugmentMethod::Eda,
                                        AugmentMethod::Aeda, AugmentMethod::SoftEda};
  std::vector<double> alphas = {0.1, 0.15, 0.2, 0.25, 0.3};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};

  double val_fraction = 0.2;
  std::size_t vocab_min_freq = 2;

  double op_rate = 0.1;
  double aeda_ratio = 1.0 / 3.0;
  std::size_t n_aug = 1;

  // Empty paths select the built-in lexicons.
  std::string thesaurus_path;
  std::string stopwords_path;

  ModelConfig model;  // vocab_size / n_classes are filled in per run
  TrainConfig train;  // seed is filled in per run

  std::string output_dir;

  void validate() const;
};

// Parses the JSON config file; unknown keys are rejected so typos fail
// loudly instead of silently falling back to defaults.
ExperimentConfig load_experiment_config(const std::string& path);

struct RunKey {
  AugmentMethod method = AugmentMethod::None;
  std::optional<double> alpha;  // set only for label-smoothing runs
  std::uint64_t seed = 0;
};

struct RunResult {
  RunKey key;
  bool ok = false;
  std::string error;
  Metrics test_metrics;
  std::size_t epochs_run = 0;
  std::size_t best_epoch = 0;
  bool stopped_early = false;
};

struct AggregateRow {
  AugmentMethod method = AugmentMethod::None;
  std::optional<double> alpha;
  std::size_t n_seeds = 0;
  std::size_t n_failed = 0;
  double mean_accuracy = 0.0;  // fraction in [0,1]
  double std_accuracy = 0.0;   // sample std over seeds
  double mean_macro_f1 = 0.0;
  double std_macro_f1 = 0.0;
  double mean_loss = 0.0;

  bool ok() const { return n_failed == 0 && n_seeds > 0; }
};

struct ReportTable {
  std::string dataset_name;
  std::vector<std::uint64_t> seeds;
  std::vector<RunResult> runs;            // canonical (method, alpha, seed) order
  std::vector<AggregateRow> aggregates;   // canonical (method, alpha) order

  const AggregateRow* find(AugmentMethod method, std::optional<double> alpha) const;

  // Mean accuracy (fraction) of the no-augmentation rows; throws when the
  // baseline was not part of the sweep or failed.
  double baseline_mean() const;

  // Best label-smoothing aggregate by mean accuracy, smaller alpha on
  // ties; nullptr when no such aggregate succeeded.
  const AggregateRow* best_smoothing_row() const;
};

// Runs every (method, alpha, seed) combination, skipping runs whose
// completion marker already exists, then assembles the table from the
// markers alone — so a resumed sweep reports identically to a fresh one.
// `jobs` bounds how many runs execute concurrently.
ReportTable run_experiment(const ExperimentConfig& cfg, std::size_t jobs = 1);

// Builds the table from whatever markers exist without training anything.
// Runs without a marker are reported as errors.
ReportTable assemble_report(const ExperimentConfig& cfg);

enum class ReportFormat { Csv, Markdown };

// Byte-deterministic rendering: same table, same bytes.
std::string render_report(const ReportTable& table, ReportFormat format);
void emit_report(const ReportTable& table, ReportFormat format, const std::string& path);

// 64-bit FNV-1a, used to verify that corpus files survive a sweep intact.
std::uint64_t fnv1a(std::span<const unsigned char> bytes);
std::uint64_t fnv1a_file(const std::string& path);

}  // namespace softaug
