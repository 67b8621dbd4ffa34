// softaug — text augmentation with label smoothing, plus the training and
// sweep machinery needed to compare methods end to end.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "softaug/augment.hpp"
#include "softaug/data.hpp"
#include "softaug/experiment.hpp"
#include "softaug/lexicon.hpp"
#include "softaug/model.hpp"
#include "softaug/train.hpp"

namespace {

struct AugmentOptions {
  std::string input;
  std::string output;
  std::string method = "eda";
  double alpha = 0.1;
  double op_rate = 0.1;
  double aeda_ratio = 1.0 / 3.0;
  int n_aug = 1;
  std::uint64_t seed = 0;
  std::size_t n_classes = 0;
  std::string thesaurus_path;
  std::string stopwords_path;
};

struct TrainOptions {
  std::string train_path;
  std::string val_path;
  double val_fraction = 0.2;
  std::string out_dir;
  std::size_t n_classes = 0;
  std::uint64_t seed = 0;
  std::size_t min_freq = 2;
  std::size_t embed_dim = 32;
  std::vector<std::size_t> filter_widths = {3, 4, 5};
  std::size_t filters = 16;
  double dropout = 0.2;
  std::size_t hidden = 64;
  std::size_t max_len = 100;
  std::size_t batch_size = 32;
  std::size_t patience = 5;
  std::size_t max_epochs = 100;
  double lr = 1e-4;
  double weight_decay = 1e-5;
};

struct EvalOptions {
  std::string model_path;
  std::string vocab_path;
  std::string data_path;
  std::size_t n_classes = 0;
};

struct ExperimentOptions {
  std::string config_path;
  std::size_t jobs = 1;
};

int run_augment(const AugmentOptions& opts) {
  const std::size_t n_classes =
      opts.n_classes > 0 ? opts.n_classes : softaug::infer_n_classes(opts.input);
  const softaug::Corpus corpus = softaug::load_jsonl(opts.input, n_classes);

  softaug::AugmentPolicy policy;
  policy.method = softaug::parse_method(opts.method);
  policy.alpha = policy.method == softaug::AugmentMethod::SoftEda ? opts.alpha : 0.0;
  policy.op_rate = opts.op_rate;
  policy.aeda_ratio = opts.aeda_ratio;
  policy.n_aug = opts.n_aug;
  policy.seed = opts.seed;
  policy.validate();

  softaug::Thesaurus file_thesaurus;
  const softaug::Thesaurus* thesaurus = &softaug::builtin_thesaurus();
  if (!opts.thesaurus_path.empty()) {
    file_thesaurus = softaug::load_thesaurus(opts.thesaurus_path);
    thesaurus = &file_thesaurus;
  }
  softaug::StopwordSet file_stopwords;
  const softaug::StopwordSet* stopwords = &softaug::builtin_stopwords();
  if (!opts.stopwords_path.empty()) {
    file_stopwords = softaug::load_stopwords(opts.stopwords_path);
    stopwords = &file_stopwords;
  }

  softaug::AugmentStats stats;
  const softaug::Corpus augmented =
      softaug::augment_corpus(corpus, policy, *thesaurus, *stopwords, &stats);
  softaug::save_jsonl(opts.output, augmented);

  std::fprintf(stderr, "[softaug] %zu originals -> %zu examples (%zu augmented, %zu skipped)\n",
               stats.originals, augmented.size(), stats.augmented, stats.skipped_empty);
  return 0;
}

int run_train(const TrainOptions& opts) {
  const std::size_t n_classes =
      opts.n_classes > 0 ? opts.n_classes : softaug::infer_n_classes(opts.train_path);
  const softaug::Corpus full = softaug::load_jsonl(opts.train_path, n_classes);

  softaug::Corpus train_corpus;
  softaug::Corpus val_corpus;
  if (!opts.val_path.empty()) {
    train_corpus = full;
    val_corpus = softaug::load_jsonl(opts.val_path, n_classes);
  } else {
    std::tie(train_corpus, val_corpus) =
        softaug::split_validation(full, opts.val_fraction, opts.seed);
  }

  const softaug::Vocab vocab = softaug::build_vocab(train_corpus, opts.min_freq);

  softaug::ModelConfig mc;
  mc.vocab_size = vocab.size();
  mc.embed_dim = opts.embed_dim;
  mc.filter_widths = opts.filter_widths;
  mc.filters_per_width = opts.filters;
  mc.n_classes = n_classes;
  mc.dropout_p = opts.dropout;
  mc.classifier_hidden = opts.hidden;
  mc.max_len = opts.max_len;
  mc.validate();

  softaug::TrainConfig tc;
  tc.batch_size = opts.batch_size;
  tc.patience = opts.patience;
  tc.max_epochs = opts.max_epochs;
  tc.seed = opts.seed;
  tc.lr = opts.lr;
  tc.weight_decay = opts.weight_decay;

  const softaug::Model model = softaug::init_model(mc, opts.seed);
  const softaug::TrainResult result = softaug::train(model, train_corpus, val_corpus, vocab, tc);

  std::filesystem::create_directories(opts.out_dir);
  softaug::save_model(opts.out_dir + "/model.ckpt", result.model);
  softaug::save_vocab(opts.out_dir + "/vocab.txt", vocab);
  softaug::save_history_csv(opts.out_dir + "/history.csv", result.history);

  const softaug::Metrics val_metrics = softaug::evaluate(result.model, val_corpus, vocab);
  std::printf("epochs=%zu best_epoch=%zu val_accuracy=%.4f val_macro_f1=%.4f val_loss=%.6f\n",
              result.history.epochs.size(), result.history.best_epoch, val_metrics.accuracy,
              val_metrics.macro_f1, val_metrics.loss);
  return 0;
}

int run_eval(const EvalOptions& opts) {
  const softaug::Model model = softaug::load_model(opts.model_path);
  const softaug::Vocab vocab = softaug::load_vocab(opts.vocab_path);
  const std::size_t n_classes = opts.n_classes > 0 ? opts.n_classes : model.cfg.n_classes;
  const softaug::Corpus corpus = softaug::load_jsonl(opts.data_path, n_classes);
  const softaug::Metrics metrics = softaug::evaluate(model, corpus, vocab);

  nlohmann::ordered_json out;
  out["accuracy"] = metrics.accuracy;
  out["macro_f1"] = metrics.macro_f1;
  out["per_class_f1"] = metrics.per_class_f1;
  out["loss"] = metrics.loss;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_experiment_cmd(const ExperimentOptions& opts) {
  const softaug::ExperimentConfig cfg = softaug::load_experiment_config(opts.config_path);
  const softaug::ReportTable table = softaug::run_experiment(cfg, opts.jobs);
  std::cout << softaug::render_report(table, softaug::ReportFormat::Markdown);
  std::fprintf(stderr, "[softaug] report written to %s/report.md and %s/results.csv\n",
               cfg.output_dir.c_str(), cfg.output_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Text augmentation with label smoothing for soft-target training"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "softaug 0.1.0");

  AugmentOptions aug;
  CLI::App* cmd_augment = app.add_subcommand("augment", "Augment a JSONL corpus");
  cmd_augment->add_option("--input", aug.input, "Input corpus (JSONL)")->required();
  cmd_augment->add_option("--output", aug.output, "Output corpus (JSONL)")->required();
  cmd_augment->add_option("--method", aug.method, "none|eda|aeda|softeda")
      ->default_val("eda");
  cmd_augment->add_option("--alpha", aug.alpha, "Label smoothing for softeda");
  cmd_augment->add_option("--op-rate", aug.op_rate, "Fraction of tokens one operation touches");
  cmd_augment->add_option("--aeda-ratio", aug.aeda_ratio, "Max punctuation per token for aeda");
  cmd_augment->add_option("--n-aug", aug.n_aug, "Augmented copies per original");
  cmd_augment->add_option("--seed", aug.seed, "RNG seed");
  cmd_augment->add_option("--n-classes", aug.n_classes, "Class count (inferred when omitted)");
  cmd_augment->add_option("--thesaurus", aug.thesaurus_path, "Thesaurus TSV (built-in default)");
  cmd_augment->add_option("--stopwords", aug.stopwords_path, "Stopword list (built-in default)");

  TrainOptions tr;
  CLI::App* cmd_train = app.add_subcommand("train", "Train a text CNN on a JSONL corpus");
  cmd_train->add_option("--train", tr.train_path, "Training corpus (JSONL)")->required();
  cmd_train->add_option("--val", tr.val_path, "Validation corpus (held out when omitted)");
  cmd_train->add_option("--val-fraction", tr.val_fraction, "Held-out fraction without --val");
  cmd_train->add_option("--out", tr.out_dir, "Directory for checkpoint/vocab/history")
      ->required();
  cmd_train->add_option("--n-classes", tr.n_classes, "Class count (inferred when omitted)");
  cmd_train->add_option("--seed", tr.seed, "RNG seed");
  cmd_train->add_option("--min-freq", tr.min_freq, "Vocabulary frequency cutoff");
  cmd_train->add_option("--embed-dim", tr.embed_dim, "Embedding width");
  cmd_train->add_option("--filter-widths", tr.filter_widths, "Convolution widths")
      ->delimiter(',');
  cmd_train->add_option("--filters", tr.filters, "Filters per width");
  cmd_train->add_option("--dropout", tr.dropout, "Dropout probability");
  cmd_train->add_option("--hidden", tr.hidden, "Classifier hidden width");
  cmd_train->add_option("--max-len", tr.max_len, "Token cap per example");
  cmd_train->add_option("--batch-size", tr.batch_size, "Mini-batch size");
  cmd_train->add_option("--patience", tr.patience, "Early-stopping patience (epochs)");
  cmd_train->add_option("--max-epochs", tr.max_epochs, "Epoch cap");
  cmd_train->add_option("--lr", tr.lr, "AdamW learning rate");
  cmd_train->add_option("--weight-decay", tr.weight_decay, "AdamW decoupled weight decay");

  EvalOptions ev;
  CLI::App* cmd_eval = app.add_subcommand("eval", "Evaluate a checkpoint on a JSONL corpus");
  cmd_eval->add_option("--model", ev.model_path, "Model checkpoint")->required();
  cmd_eval->add_option("--vocab", ev.vocab_path, "Vocabulary file")->required();
  cmd_eval->add_option("--data", ev.data_path, "Evaluation corpus (JSONL)")->required();
  cmd_eval->add_option("--n-classes", ev.n_classes, "Class count (checkpoint default)");

  ExperimentOptions ex;
  CLI::App* cmd_experiment =
      app.add_subcommand("experiment", "Run a full method-comparison sweep");
  cmd_experiment->add_option("--config", ex.config_path, "Experiment config (JSON)")->required();
  cmd_experiment->add_option("--jobs", ex.jobs, "Concurrent training runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (cmd_augment->parsed()) return run_augment(aug);
    if (cmd_train->parsed()) return run_train(tr);
    if (cmd_eval->parsed()) return run_eval(ev);
    if (cmd_experiment->parsed()) return run_experiment_cmd(ex);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "softaug: error: %s\n", e.what());
    return 2;
  }
  return 0;
}
