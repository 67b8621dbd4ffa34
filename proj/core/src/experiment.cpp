#include "softaug/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "softaug/lexicon.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace softaug {

namespace {

std::string strf(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof(buffer), format, args);
  va_end(args);
  return buffer;
}

std::string format_alpha(double alpha) { return strf("%g", alpha); }

std::string run_dir(const ExperimentConfig& cfg, const RunKey& key) {
  const std::string alpha_part = key.alpha ? format_alpha(*key.alpha) : "na";
  return cfg.output_dir + "/" + method_name(key.method) + "/" + alpha_part + "/" +
         std::to_string(key.seed);
}

std::vector<RunKey> enumerate_runs(const ExperimentConfig& cfg) {
  std::vector<RunKey> keys;
  for (AugmentMethod method : cfg.methods) {
    if (method == AugmentMethod::SoftEda) {
      for (double alpha : cfg.alphas) {
        for (std::uint64_t seed : cfg.seeds) keys.push_back({method, alpha, seed});
      }
    } else {
      for (std::uint64_t seed : cfg.seeds) keys.push_back({method, std::nullopt, seed});
    }
  }
  return keys;
}

void sort_canonical(std::vector<RunKey>& keys) {
  std::sort(keys.begin(), keys.end(), [](const RunKey& a, const RunKey& b) {
    return std::tie(a.method, a.alpha, a.seed) < std::tie(b.method, b.alpha, b.seed);
  });
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing file: " + path);
}

// Markers are written to a temp name and renamed so a killed process never
// leaves a half-written metrics.json behind.
void write_marker(const std::string& dir, const std::string& name, const ordered_json& body) {
  const std::string tmp = dir + "/" + name + ".tmp";
  write_text_file(tmp, body.dump(2) + "\n");
  fs::rename(tmp, dir + "/" + name);
}

struct RunContext {
  const ExperimentConfig& cfg;
  const Corpus& train_corpus;
  const Corpus& test_corpus;
  const Thesaurus& thesaurus;
  const StopwordSet& stopwords;
};

void execute_run(const RunContext& ctx, const RunKey& key) {
  const ExperimentConfig& cfg = ctx.cfg;
  const std::string dir = run_dir(cfg, key);
  fs::create_directories(dir);

  auto [train_split, val_split] =
      split_validation(ctx.train_corpus, cfg.val_fraction, key.seed);

  AugmentPolicy policy;
  policy.method = key.method;
  policy.op_rate = cfg.op_rate;
  policy.aeda_ratio = cfg.aeda_ratio;
  policy.alpha = key.alpha.value_or(0.0);
  policy.n_aug = static_cast<int>(cfg.n_aug);
  policy.seed = key.seed;
  const Corpus augmented = augment_corpus(train_split, policy, ctx.thesaurus, ctx.stopwords);

  const Vocab vocab = build_vocab(augmented, cfg.vocab_min_freq);

  ModelConfig mc = cfg.model;
  mc.vocab_size = vocab.size();
  mc.n_classes = ctx.train_corpus.n_classes;
  mc.validate();

  TrainConfig tc = cfg.train;
  tc.seed = key.seed;

  const Model model = init_model(mc, key.seed);
  const TrainResult trained = train(model, augmented, val_split, vocab, tc);
  const Metrics metrics = evaluate(trained.model, ctx.test_corpus, vocab);

  save_model(dir + "/model.ckpt", trained.model);
  save_history_csv(dir + "/history.csv", trained.history);
  save_vocab(dir + "/vocab.txt", vocab);

  ordered_json marker;
  marker["method"] = method_name(key.method);
  if (key.alpha) {
    marker["alpha"] = *key.alpha;
  } else {
    marker["alpha"] = nullptr;
  }
  marker["seed"] = key.seed;
  marker["accuracy"] = metrics.accuracy;
  marker["macro_f1"] = metrics.macro_f1;
  marker["per_class_f1"] = metrics.per_class_f1;
  marker["loss"] = metrics.loss;
  marker["epochs_run"] = trained.history.epochs.size();
  marker["best_epoch"] = trained.history.best_epoch;
  marker["stopped_early"] = trained.history.stop_reason == StopReason::EarlyStopped;
  write_marker(dir, "metrics.json", marker);
  fs::remove(dir + "/error.json");
}

RunResult read_run(const ExperimentConfig& cfg, const RunKey& key) {
  RunResult result;
  result.key = key;
  const std::string dir = run_dir(cfg, key);
  const std::string marker_path = dir + "/metrics.json";

  std::ifstream in(marker_path);
  if (!in) {
    result.error = "missing run artifacts";
    std::ifstream err_in(dir + "/error.json");
    if (err_in) {
      try {
        json err = json::parse(err_in);
        result.error = err.at("error").get<std::string>();
      } catch (const json::exception&) {
        result.error = "unreadable error marker";
      }
    }
    return result;
  }

  try {
    json marker = json::parse(in);
    if (marker.at("method").get<std::string>() != method_name(key.method) ||
        marker.at("seed").get<std::uint64_t>() != key.seed) {
      throw std::runtime_error("marker does not match its directory");
    }
    result.test_metrics.accuracy = marker.at("accuracy").get<double>();
    result.test_metrics.macro_f1 = marker.at("macro_f1").get<double>();
    result.test_metrics.per_class_f1 = marker.at("per_class_f1").get<std::vector<double>>();
    result.test_metrics.loss = marker.at("loss").get<double>();
    result.epochs_run = marker.at("epochs_run").get<std::size_t>();
    result.best_epoch = marker.at("best_epoch").get<std::size_t>();
    result.stopped_early = marker.at("stopped_early").get<bool>();
    result.ok = true;
  } catch (const std::exception& e) {
    result.ok = false;
    result.error = std::string("bad marker: ") + e.what();
  }
  return result;
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return out;
}

ReportTable assemble(const ExperimentConfig& cfg) {
  std::vector<RunKey> keys = enumerate_runs(cfg);
  sort_canonical(keys);

  ReportTable table;
  table.dataset_name = cfg.dataset_name;
  table.seeds = cfg.seeds;
  for (const RunKey& key : keys) table.runs.push_back(read_run(cfg, key));

  // Group the canonically ordered runs into per-(method, alpha) aggregates.
  std::size_t i = 0;
  while (i < table.runs.size()) {
    std::size_t j = i;
    AggregateRow row;
    row.method = table.runs[i].key.method;
    row.alpha = table.runs[i].key.alpha;
    std::vector<double> accs, f1s, losses;
    while (j < table.runs.size() && table.runs[j].key.method == row.method &&
           table.runs[j].key.alpha == row.alpha) {
      const RunResult& run = table.runs[j];
      row.n_seeds += 1;
      if (run.ok) {
        accs.push_back(run.test_metrics.accuracy);
        f1s.push_back(run.test_metrics.macro_f1);
        losses.push_back(run.test_metrics.loss);
      } else {
        row.n_failed += 1;
      }
      ++j;
    }
    if (row.n_failed == 0) {
      const MeanStd acc = mean_std(accs);
      const MeanStd f1 = mean_std(f1s);
      row.mean_accuracy = acc.mean;
      row.std_accuracy = acc.std;
      row.mean_macro_f1 = f1.mean;
      row.std_macro_f1 = f1.std;
      row.mean_loss = mean_std(losses).mean;
    }
    table.aggregates.push_back(row);
    i = j;
  }
  return table;
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string render_csv(const ReportTable& table) {
  std::string out = "method,alpha,seed,accuracy_pct,macro_f1,loss,status\n";
  for (const RunResult& run : table.runs) {
    out += method_name(run.key.method);
    out += ',';
    if (run.key.alpha) out += format_alpha(*run.key.alpha);
    out += ',';
    out += std::to_string(run.key.seed);
    if (run.ok) {
      out += strf(",%.4f,%.6f,%.6f,ok", run.test_metrics.accuracy * 100.0,
                  run.test_metrics.macro_f1, run.test_metrics.loss);
    } else {
      out += ",,,," + csv_quote("error: " + run.error);
    }
    out += '\n';
  }
  return out;
}

std::string method_label(AugmentMethod method) {
  switch (method) {
    case AugmentMethod::None: return "baseline (no augmentation)";
    case AugmentMethod::Eda: return "w/ EDA";
    case AugmentMethod::Aeda: return "w/ AEDA";
    case AugmentMethod::SoftEda: return "w/ softEDA";
  }
  throw std::invalid_argument("unknown augmentation method");
}

std::string render_markdown(const ReportTable& table) {
  std::string out = "# Augmentation sweep — " + table.dataset_name + "\n\n";
  out += strf("Test accuracy (%%), mean +/- std over %zu seed%s (", table.seeds.size(),
              table.seeds.size() == 1 ? "" : "s");
  for (std::size_t i = 0; i < table.seeds.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(table.seeds[i]);
  }
  out += ").\n";
  out +=
      "Augmentation rows report the gain in percentage points (%p) over the\n"
      "no-augmentation baseline; the best row is bolded.\n\n";

  const AggregateRow* baseline = table.find(AugmentMethod::None, std::nullopt);
  const bool have_baseline = baseline != nullptr && baseline->ok();

  // One summary row per method; label smoothing is represented by its
  // best-performing alpha, like the headline comparison this mirrors.
  struct SummaryRow {
    std::string label;
    const AggregateRow* agg;
  };
  std::vector<SummaryRow> rows;
  for (AugmentMethod method : {AugmentMethod::None, AugmentMethod::Eda, AugmentMethod::Aeda}) {
    if (const AggregateRow* agg = table.find(method, std::nullopt)) {
      rows.push_back({method_label(method), agg});
    }
  }
  if (const AggregateRow* best = table.best_smoothing_row()) {
    rows.push_back(
        {method_label(AugmentMethod::SoftEda) + " (alpha=" + format_alpha(*best->alpha) + ")",
         best});
  } else {
    // All smoothing aggregates failed (or none were configured with runs).
    for (const AggregateRow& agg : table.aggregates) {
      if (agg.method == AugmentMethod::SoftEda) {
        rows.push_back({method_label(AugmentMethod::SoftEda), &agg});
        break;
      }
    }
  }

  std::size_t best_row = rows.size();
  double best_acc = -1.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].agg->ok() && rows[i].agg->mean_accuracy > best_acc) {
      best_acc = rows[i].agg->mean_accuracy;
      best_row = i;
    }
  }

  out += "| Method | Test accuracy |\n| --- | --- |\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const AggregateRow& agg = *rows[i].agg;
    std::string cell;
    if (!agg.ok()) {
      cell = strf("error (%zu/%zu seeds failed)", agg.n_failed, agg.n_seeds);
    } else if (agg.method == AugmentMethod::None || !have_baseline) {
      cell = strf("%.2f +/- %.2f", agg.mean_accuracy * 100.0, agg.std_accuracy * 100.0);
    } else {
      cell = strf("%+.2f", (agg.mean_accuracy - baseline->mean_accuracy) * 100.0);
    }
    if (i == best_row) {
      out += "| **" + rows[i].label + "** | **" + cell + "** |\n";
    } else {
      out += "| " + rows[i].label + " | " + cell + " |\n";
    }
  }

  bool any_smoothing = false;
  for (const AggregateRow& agg : table.aggregates) {
    if (agg.method == AugmentMethod::SoftEda) any_smoothing = true;
  }
  if (any_smoothing) {
    out += "\n## softEDA across smoothing values\n\n";
    out += "| alpha | Test accuracy | Gain (%p) |\n| --- | --- | --- |\n";
    for (const AggregateRow& agg : table.aggregates) {
      if (agg.method != AugmentMethod::SoftEda) continue;
      out += "| " + format_alpha(agg.alpha.value_or(0.0)) + " | ";
      if (!agg.ok()) {
        out += strf("error (%zu/%zu seeds failed) | |\n", agg.n_failed, agg.n_seeds);
        continue;
      }
      out += strf("%.2f +/- %.2f | ", agg.mean_accuracy * 100.0, agg.std_accuracy * 100.0);
      if (have_baseline) {
        out += strf("%+.2f", (agg.mean_accuracy - baseline->mean_accuracy) * 100.0);
      } else {
        out += "n/a";
      }
      out += " |\n";
    }
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (train_path.empty()) throw std::invalid_argument("experiment: train_path is required");
  if (test_path.empty()) throw std::invalid_argument("experiment: test_path is required");
  if (output_dir.empty()) throw std::invalid_argument("experiment: output_dir is required");
  if (methods.empty()) throw std::invalid_argument("experiment: no methods configured");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    for (std::size_t j = i + 1; j < methods.size(); ++j) {
      if (methods[i] == methods[j]) {
        throw std::invalid_argument("experiment: duplicate method " + method_name(methods[i]));
      }
    }
  }
  const bool smoothing =
      std::find(methods.begin(), methods.end(), AugmentMethod::SoftEda) != methods.end();
  if (smoothing && alphas.empty()) {
    throw std::invalid_argument("experiment: alpha grid is empty but softeda is configured");
  }
  for (double alpha : alphas) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
      throw std::invalid_argument("experiment: alpha must be in [0,1)");
    }
  }
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    for (std::size_t j = i + 1; j < alphas.size(); ++j) {
      if (alphas[i] == alphas[j]) throw std::invalid_argument("experiment: duplicate alpha");
    }
  }
  if (seeds.empty()) throw std::invalid_argument("experiment: at least one seed is required");
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    for (std::size_t j = i + 1; j < seeds.size(); ++j) {
      if (seeds[i] == seeds[j]) throw std::invalid_argument("experiment: duplicate seed");
    }
  }
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw std::invalid_argument("experiment: val_fraction must be in (0,1)");
  }
  if (vocab_min_freq < 1) throw std::invalid_argument("experiment: vocab_min_freq must be >= 1");
  if (!(op_rate >= 0.0 && op_rate <= 1.0)) {
    throw std::invalid_argument("experiment: op_rate must be in [0,1]");
  }
  if (!(aeda_ratio > 0.0 && aeda_ratio <= 1.0)) {
    throw std::invalid_argument("experiment: aeda_ratio must be in (0,1]");
  }
  if (n_aug < 1) throw std::invalid_argument("experiment: n_aug must be >= 1");
  train.validate();
}

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&key](const char* k) { return key == k; }) == allowed.end()) {
      throw std::invalid_argument("experiment config: unknown key \"" + key + "\" in " + where);
    }
  }
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open experiment config: " + path);

  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }

  ExperimentConfig cfg;
  try {
    check_keys(doc,
               {"dataset", "train_path", "test_path", "n_classes", "methods", "alphas", "seeds",
                "val_fraction", "vocab_min_freq", "augment", "model", "train", "thesaurus",
                "stopwords", "output_dir"},
               "top level");
    if (doc.contains("dataset")) cfg.dataset_name = doc["dataset"].get<std::string>();
    cfg.train_path = doc.at("train_path").get<std::string>();
    cfg.test_path = doc.at("test_path").get<std::string>();
    cfg.output_dir = doc.at("output_dir").get<std::string>();
    if (doc.contains("n_classes")) cfg.n_classes = doc["n_classes"].get<std::size_t>();
    if (doc.contains("methods")) {
      cfg.methods.clear();
      for (const auto& m : doc["methods"]) cfg.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (doc.contains("alphas")) cfg.alphas = doc["alphas"].get<std::vector<double>>();
    if (doc.contains("seeds")) cfg.seeds = doc["seeds"].get<std::vector<std::uint64_t>>();
    if (doc.contains("val_fraction")) cfg.val_fraction = doc["val_fraction"].get<double>();
    if (doc.contains("vocab_min_freq")) {
      cfg.vocab_min_freq = doc["vocab_min_freq"].get<std::size_t>();
    }
    if (doc.contains("thesaurus")) cfg.thesaurus_path = doc["thesaurus"].get<std::string>();
    if (doc.contains("stopwords")) cfg.stopwords_path = doc["stopwords"].get<std::string>();
    if (doc.contains("augment")) {
      const json& aug = doc["augment"];
      check_keys(aug, {"op_rate", "aeda_ratio", "n_aug"}, "\"augment\"");
      if (aug.contains("op_rate")) cfg.op_rate = aug["op_rate"].get<double>();
      if (aug.contains("aeda_ratio")) cfg.aeda_ratio = aug["aeda_ratio"].get<double>();
      if (aug.contains("n_aug")) cfg.n_aug = aug["n_aug"].get<std::size_t>();
    }
    if (doc.contains("model")) {
      const json& model = doc["model"];
      check_keys(model,
                 {"embed_dim", "filter_widths", "filters_per_width", "dropout", "hidden",
                  "max_len"},
                 "\"model\"");
      if (model.contains("embed_dim")) cfg.model.embed_dim = model["embed_dim"].get<std::size_t>();
      if (model.contains("filter_widths")) {
        cfg.model.filter_widths = model["filter_widths"].get<std::vector<std::size_t>>();
      }
      if (model.contains("filters_per_width")) {
        cfg.model.filters_per_width = model["filters_per_width"].get<std::size_t>();
      }
      if (model.contains("dropout")) cfg.model.dropout_p = model["dropout"].get<double>();
      if (model.contains("hidden")) {
        cfg.model.classifier_hidden = model["hidden"].get<std::size_t>();
      }
      if (model.contains("max_len")) cfg.model.max_len = model["max_len"].get<std::size_t>();
    }
    if (doc.contains("train")) {
      const json& tr = doc["train"];
      check_keys(tr, {"batch_size", "patience", "max_epochs", "lr", "weight_decay"}, "\"train\"");
      if (tr.contains("batch_size")) cfg.train.batch_size = tr["batch_size"].get<std::size_t>();
      if (tr.contains("patience")) cfg.train.patience = tr["patience"].get<std::size_t>();
      if (tr.contains("max_epochs")) cfg.train.max_epochs = tr["max_epochs"].get<std::size_t>();
      if (tr.contains("lr")) cfg.train.lr = tr["lr"].get<double>();
      if (tr.contains("weight_decay")) cfg.train.weight_decay = tr["weight_decay"].get<double>();
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }

  cfg.validate();
  return cfg;
}

const AggregateRow* ReportTable::find(AugmentMethod method, std::optional<double> alpha) const {
  for (const AggregateRow& row : aggregates) {
    if (row.method == method && row.alpha == alpha) return &row;
  }
  return nullptr;
}

double ReportTable::baseline_mean() const {
  const AggregateRow* row = find(AugmentMethod::None, std::nullopt);
  if (row == nullptr || !row->ok()) {
    throw std::runtime_error("report: no successful no-augmentation baseline");
  }
  return row->mean_accuracy;
}

const AggregateRow* ReportTable::best_smoothing_row() const {
  const AggregateRow* best = nullptr;
  for (const AggregateRow& row : aggregates) {
    if (row.method != AugmentMethod::SoftEda || !row.ok()) continue;
    // Canonical order already sorts alphas ascending, so a strict
    // comparison keeps the smaller alpha on ties.
    if (best == nullptr || row.mean_accuracy > best->mean_accuracy) best = &row;
  }
  return best;
}

ReportTable run_experiment(const ExperimentConfig& cfg, std::size_t jobs) {
  cfg.validate();
  if (jobs < 1) throw std::invalid_argument("experiment: jobs must be >= 1");

  fs::create_directories(cfg.output_dir);

  // Record corpus digests up front; a resumed sweep refuses to mix results
  // computed from different input files, and the post-sweep check proves
  // augmentation never touched the inputs.
  const std::uint64_t train_digest = fnv1a_file(cfg.train_path);
  const std::uint64_t test_digest = fnv1a_file(cfg.test_path);
  const std::string digest_path = cfg.output_dir + "/corpus_digests.json";
  if (fs::exists(digest_path)) {
    std::ifstream in(digest_path);
    json recorded = json::parse(in);
    if (recorded.at("train_fnv1a").get<std::uint64_t>() != train_digest ||
        recorded.at("test_fnv1a").get<std::uint64_t>() != test_digest) {
      throw std::runtime_error("experiment: corpus files changed since the recorded run; "
                               "remove " + cfg.output_dir + " to start over");
    }
  } else {
    ordered_json digests;
    digests["train_path"] = cfg.train_path;
    digests["train_fnv1a"] = train_digest;
    digests["test_path"] = cfg.test_path;
    digests["test_fnv1a"] = test_digest;
    write_text_file(digest_path, digests.dump(2) + "\n");
  }

  const std::size_t n_classes =
      cfg.n_classes > 0 ? cfg.n_classes : infer_n_classes(cfg.train_path);
  const Corpus train_corpus = load_jsonl(cfg.train_path, n_classes);
  const Corpus test_corpus = load_jsonl(cfg.test_path, n_classes);

  Thesaurus file_thesaurus;
  const Thesaurus* thesaurus = &builtin_thesaurus();
  if (!cfg.thesaurus_path.empty()) {
    file_thesaurus = load_thesaurus(cfg.thesaurus_path);
    thesaurus = &file_thesaurus;
  }
  StopwordSet file_stopwords;
  const StopwordSet* stopwords = &builtin_stopwords();
  if (!cfg.stopwords_path.empty()) {
    file_stopwords = load_stopwords(cfg.stopwords_path);
    stopwords = &file_stopwords;
  }

  std::vector<RunKey> pending;
  for (const RunKey& key : enumerate_runs(cfg)) {
    if (!fs::exists(run_dir(cfg, key) + "/metrics.json")) pending.push_back(key);
  }

  const RunContext ctx{cfg, train_corpus, test_corpus, *thesaurus, *stopwords};
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pending.size()) return;
      const RunKey& key = pending[i];
      const std::string alpha_text = key.alpha ? format_alpha(*key.alpha) : "-";
      try {
        execute_run(ctx, key);
        const RunResult done = read_run(cfg, key);
        std::lock_guard<std::mutex> lock(log_mutex);
        std::fprintf(stderr, "[softaug] %-7s alpha=%-4s seed=%llu  acc=%.2f%%  (%zu/%zu)\n",
                     method_name(key.method).c_str(), alpha_text.c_str(),
                     static_cast<unsigned long long>(key.seed),
                     done.test_metrics.accuracy * 100.0, i + 1, pending.size());
      } catch (const std::exception& e) {
        ordered_json err;
        err["method"] = method_name(key.method);
        if (key.alpha) {
          err["alpha"] = *key.alpha;
        } else {
          err["alpha"] = nullptr;
        }
        err["seed"] = key.seed;
        err["error"] = e.what();
        write_marker(run_dir(cfg, key), "error.json", err);
        std::lock_guard<std::mutex> lock(log_mutex);
        std::fprintf(stderr, "[softaug] %-7s alpha=%-4s seed=%llu  FAILED: %s\n",
                     method_name(key.method).c_str(), alpha_text.c_str(),
                     static_cast<unsigned long long>(key.seed), e.what());
      }
    }
  };

  if (jobs <= 1 || pending.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    const std::size_t n_threads = std::min(jobs, pending.size());
    threads.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }

  if (fnv1a_file(cfg.train_path) != train_digest ||
      fnv1a_file(cfg.test_path) != test_digest) {
    throw std::runtime_error("experiment: corpus files changed during the sweep");
  }

  const ReportTable table = assemble(cfg);
  emit_report(table, ReportFormat::Csv, cfg.output_dir + "/results.csv");
  emit_report(table, ReportFormat::Markdown, cfg.output_dir + "/report.md");
  return table;
}

ReportTable assemble_report(const ExperimentConfig& cfg) {
  cfg.validate();
  return assemble(cfg);
}

std::string render_report(const ReportTable& table, ReportFormat format) {
  if (table.runs.empty()) throw std::invalid_argument("report: empty table");
  switch (format) {
    case ReportFormat::Csv: return render_csv(table);
    case ReportFormat::Markdown: return render_markdown(table);
  }
  throw std::invalid_argument("report: unknown format");
}

void emit_report(const ReportTable& table, ReportFormat format, const std::string& path) {
  write_text_file(path, render_report(table, format));
}

std::uint64_t fnv1a(std::span<const unsigned char> bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    hash ^= b;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file for hashing: " + path);
  std::uint64_t hash = 14695981039346656037ull;
  char buffer[1 << 16];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 1099511628211ull;
    }
  }
  return hash;
}

}  // namespace softaug
