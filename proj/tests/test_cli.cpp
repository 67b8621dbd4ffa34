#include <doctest.h>

#include <json.hpp>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "softaug/data.hpp"
#include "synthetic_corpus.hpp"

namespace fs = std::filesystem;
using namespace softaug;

namespace {

// Invokes the installed binary the way a user would; returns the exit code.
int run_cli(const std::string& args, const fs::path& stdout_path, const fs::path& stderr_path) {
  const std::string cmd = std::string("\"") + SOFTAUG_CLI_PATH + "\" " + args + " > " +
                          stdout_path.string() + " 2> " + stderr_path.string();
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("help and version exit cleanly") {
  const fs::path dir = fresh_dir("softaug_cli_help");
  CHECK(run_cli("--help", dir / "out", dir / "err") == 0);
  const auto lines = read_lines(dir / "out");
  CHECK_FALSE(lines.empty());

  CHECK(run_cli("--version", dir / "out", dir / "err") == 0);
  CHECK(run_cli("augment --help", dir / "out", dir / "err") == 0);
  CHECK(run_cli("train --help", dir / "out", dir / "err") == 0);
  CHECK(run_cli("eval --help", dir / "out", dir / "err") == 0);
  CHECK(run_cli("experiment --help", dir / "out", dir / "err") == 0);
}

TEST_CASE("usage errors exit with code 1") {
  const fs::path dir = fresh_dir("softaug_cli_usage");
  CHECK(run_cli("--no-such-flag", dir / "out", dir / "err") == 1);
  CHECK(run_cli("augment", dir / "out", dir / "err") == 1);  // missing required flags
  CHECK(run_cli("frobnicate", dir / "out", dir / "err") == 1);
}

TEST_CASE("runtime failures exit with code 2") {
  const fs::path dir = fresh_dir("softaug_cli_runtime");
  CHECK(run_cli("experiment --config missing.file", dir / "out", dir / "err") == 2);
  const auto err = read_lines(dir / "err");
  REQUIRE_FALSE(err.empty());
  CHECK(err[0].find("softaug: error:") != std::string::npos);

  CHECK(run_cli("eval --model nope.ckpt --vocab nope.txt --data nope.jsonl", dir / "out",
                dir / "err") == 2);
}

TEST_CASE("augment doubles a three-line corpus with one copy each") {
  const fs::path dir = fresh_dir("softaug_cli_augment");
  {
    std::ofstream in(dir / "mini.jsonl");
    in << R"({"text": "what does nasa stand for", "label": 0})" << "\n";
    in << R"({"text": "who built the telescope", "label": 3})" << "\n";
    in << R"({"text": "where is the tallest tower", "label": 4})" << "\n";
  }

  const std::string args = "augment --input " + (dir / "mini.jsonl").string() + " --output " +
                           (dir / "aug.jsonl").string() +
                           " --method softeda --alpha 0.1 --n-aug 1 --n-classes 6 --seed 7";
  CHECK(run_cli(args, dir / "out", dir / "err") == 0);

  const auto lines = read_lines(dir / "aug.jsonl");
  REQUIRE(lines.size() == 6);

  const Corpus corpus = load_jsonl((dir / "aug.jsonl").string(), 6);
  std::size_t originals = 0;
  for (const Example& ex : corpus.examples) {
    REQUIRE(ex.label.size() == 6);
    double max_p = 0.0;
    for (double p : ex.label) max_p = std::max(max_p, p);
    if (ex.origin == Origin::Original) {
      ++originals;
      CHECK(max_p == 1.0);
    } else {
      CHECK(max_p == doctest::Approx(1.0 - 0.1 + 0.1 / 6.0).epsilon(1e-12));
    }
  }
  CHECK(originals == 3);

  // Determinism: the same invocation writes the same bytes.
  const std::string again = "augment --input " + (dir / "mini.jsonl").string() + " --output " +
                            (dir / "aug2.jsonl").string() +
                            " --method softeda --alpha 0.1 --n-aug 1 --n-classes 6 --seed 7";
  CHECK(run_cli(again, dir / "out", dir / "err") == 0);
  CHECK(read_lines(dir / "aug2.jsonl") == lines);
}

TEST_CASE("train then eval round-trips through checkpoint files") {
  const fs::path dir = fresh_dir("softaug_cli_train");
  save_jsonl((dir / "train.jsonl").string(), testing::make_question_corpus(48, 77));
  save_jsonl((dir / "test.jsonl").string(), testing::make_question_corpus(12, 78));

  const std::string train_args =
      "train --train " + (dir / "train.jsonl").string() + " --out " + (dir / "run").string() +
      " --val-fraction 0.25 --n-classes 6 --embed-dim 8 --filter-widths 2,3 " +
      "--filters 4 --hidden 16 --max-len 20 --dropout 0.1 " +
      "--batch-size 8 --max-epochs 2 --min-freq 1 --seed 5";
  CHECK(run_cli(train_args, dir / "out", dir / "err") == 0);
  CHECK(fs::exists(dir / "run" / "model.ckpt"));
  CHECK(fs::exists(dir / "run" / "vocab.txt"));
  CHECK(fs::exists(dir / "run" / "history.csv"));

  const auto summary = read_lines(dir / "out");
  REQUIRE_FALSE(summary.empty());
  CHECK(summary.back().find("epochs=") != std::string::npos);
  CHECK(summary.back().find("val_accuracy=") != std::string::npos);

  const std::string eval_args = "eval --model " + (dir / "run" / "model.ckpt").string() +
                                " --vocab " + (dir / "run" / "vocab.txt").string() + " --data " +
                                (dir / "test.jsonl").string();
  CHECK(run_cli(eval_args, dir / "out", dir / "err") == 0);

  std::ifstream in(dir / "out");
  const nlohmann::json metrics = nlohmann::json::parse(in);
  CHECK(metrics.at("accuracy").is_number());
  CHECK(metrics.at("macro_f1").is_number());
  CHECK(metrics.at("per_class_f1").size() == 6);
  CHECK(metrics.at("loss").get<double>() > 0.0);
}

TEST_CASE("experiment subcommand writes reports from a config file") {
  const fs::path dir = fresh_dir("softaug_cli_experiment");
  save_jsonl((dir / "train.jsonl").string(), testing::make_question_corpus(60, 81));
  save_jsonl((dir / "test.jsonl").string(), testing::make_question_corpus(24, 82));

  {
    std::ofstream cfg(dir / "config.json");
    cfg << R"({
      "dataset": "cli-smoke",
      "train_path": ")" << (dir / "train.jsonl").string() << R"(",
      "test_path": ")" << (dir / "test.jsonl").string() << R"(",
      "n_classes": 6,
      "methods": ["none", "softeda"],
      "alphas": [0.1],
      "seeds": [1],
      "vocab_min_freq": 1,
      "model": {"embed_dim": 8, "filter_widths": [2], "filters_per_width": 4,
                "dropout": 0.0, "hidden": 8, "max_len": 20},
      "train": {"batch_size": 16, "max_epochs": 1},
      "output_dir": ")" << (dir / "out_dir").string() << R"("
    })";
  }

  CHECK(run_cli("experiment --config " + (dir / "config.json").string(), dir / "out",
                dir / "err") == 0);
  CHECK(fs::exists(dir / "out_dir" / "results.csv"));
  CHECK(fs::exists(dir / "out_dir" / "report.md"));

  const auto stdout_lines = read_lines(dir / "out");
  bool saw_table = false;
  for (const std::string& line : stdout_lines) {
    if (line.find("| Method | Test accuracy |") != std::string::npos) saw_table = true;
  }
  CHECK(saw_table);
}
