// Copyright 2026 The bdlbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: generate-data, train, evaluate, benchmark, report.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "bdlbench/bench.hpp"
#include "bdlbench/checkpoint.hpp"
#include "bdlbench/errors.hpp"
#include "bdlbench/report.hpp"

namespace fs = std::filesystem;
using bdlbench::BenchmarkConfig;

namespace {

constexpr int kExitCellFailure = 2;

// Flags that override BenchmarkConfig fields when given.
struct ConfigFlags {
  std::string config_path;
  std::vector<std::string> methods;
  std::optional<std::size_t> n_seeds;
  std::optional<std::uint64_t> base_seed;
  std::optional<std::size_t> num_samples;
  std::optional<std::size_t> samples_per_member;
  std::vector<std::size_t> hidden_sizes;
  std::optional<double> learning_rate;
  std::optional<std::size_t> batch_size;
  std::optional<double> dropout_rate;
  std::optional<double> l2_coefficient;
  std::optional<std::size_t> max_epochs;
  std::optional<std::size_t> patience;
  std::optional<std::size_t> ensemble_members;
  std::vector<double> fractions;
  std::vector<double> table_fractions;
  std::optional<std::string> csv_train;
  std::optional<std::string> csv_val;
  std::optional<std::string> csv_test;
  std::optional<std::string> csv_shifted;
  std::optional<std::string> output_dir;
  std::optional<std::size_t> workers;

  void Register(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file (flags override it)")
        ->check(CLI::ExistingFile);
    app->add_option("--methods", methods, "Methods to run")->delimiter(',');
    app->add_option("--n-seeds", n_seeds, "Independent seeds per method");
    app->add_option("--base-seed", base_seed, "Base seed");
    app->add_option("--num-samples", num_samples, "Predictive samples T");
    app->add_option("--samples-per-member", samples_per_member,
                    "Dropout samples per ensemble member");
    app->add_option("--hidden-sizes", hidden_sizes, "Hidden layer widths")->delimiter(',');
    app->add_option("--lr", learning_rate, "Adam learning rate");
    app->add_option("--batch-size", batch_size, "Mini-batch size");
    app->add_option("--dropout", dropout_rate, "Dropout rate");
    app->add_option("--l2", l2_coefficient, "L2 coefficient");
    app->add_option("--max-epochs", max_epochs, "Maximum training epochs");
    app->add_option("--patience", patience, "Early-stopping patience (0 disables)");
    app->add_option("--ensemble-members", ensemble_members, "Deep ensemble size");
    app->add_option("--fractions", fractions, "Retention fraction grid")->delimiter(',');
    app->add_option("--table-fractions", table_fractions, "Table columns")->delimiter(',');
    app->add_option("--csv-train", csv_train, "Training CSV (replaces the generator)");
    app->add_option("--csv-val", csv_val, "Validation CSV");
    app->add_option("--csv-test", csv_test, "Test CSV");
    app->add_option("--csv-shifted", csv_shifted, "Shifted test CSV");
    app->add_option("--output-dir", output_dir, "Output directory");
    app->add_option("--workers", workers, "Worker threads");
  }

  BenchmarkConfig Resolve() const {
    BenchmarkConfig config;
    if (!config_path.empty()) {
      config = bdlbench::BenchmarkConfigFromJson(
          nlohmann::json::parse(bdlbench::ReadTextFile(config_path)), config);
    }
    if (!methods.empty()) {
      config.methods.clear();
      for (const auto& m : methods) config.methods.push_back(bdlbench::ParseMethodTag(m));
    }
    if (n_seeds) config.n_seeds = *n_seeds;
    if (base_seed) config.base_seed = *base_seed;
    if (num_samples) config.sampling.num_samples = *num_samples;
    if (samples_per_member) config.sampling.samples_per_member = *samples_per_member;
    if (!hidden_sizes.empty()) config.hidden_sizes = hidden_sizes;
    if (learning_rate) config.train.adam.learning_rate = *learning_rate;
    if (batch_size) config.train.batch_size = *batch_size;
    if (dropout_rate) config.dropout_rate = *dropout_rate;
    if (l2_coefficient) config.l2_coefficient = *l2_coefficient;
    if (max_epochs) config.train.max_epochs = *max_epochs;
    if (patience) config.train.patience = *patience;
    if (ensemble_members) config.ensemble_members = *ensemble_members;
    if (!fractions.empty()) config.fractions = fractions;
    if (!table_fractions.empty()) config.table_fractions = table_fractions;
    if (csv_train || csv_test || csv_shifted) {
      if (!csv_train || !csv_test || !csv_shifted) {
        throw bdlbench::ArgumentError("--csv-train, --csv-test and --csv-shifted go together");
      }
      config.csv = bdlbench::CsvSource{*csv_train, csv_val.value_or(""), *csv_test, *csv_shifted};
    }
    if (output_dir) config.output_dir = *output_dir;
    if (workers) config.workers = *workers;
    config.Validate();
    return config;
  }
};

std::string Path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

int GenerateData(const ConfigFlags& flags) {
  const BenchmarkConfig config = flags.Resolve();
  const auto splits = bdlbench::GenerateSynthetic(config.generator, config.base_seed);
  fs::create_directories(config.output_dir);
  bdlbench::SaveCsv(splits.train, Path(config.output_dir, "train.csv"));
  bdlbench::SaveCsv(splits.val, Path(config.output_dir, "val.csv"));
  bdlbench::SaveCsv(splits.test, Path(config.output_dir, "test.csv"));
  bdlbench::SaveCsv(splits.shifted_test, Path(config.output_dir, "shifted_test.csv"));
  bdlbench::WriteTextFile(Path(config.output_dir, "generator.json"),
                          bdlbench::ToJson(config.generator).dump(2) + '\n');
  fmt::print("wrote {} train, {} val, {} test, {} shifted points to {}\n", splits.train.size(),
             splits.val.size(), splits.test.size(), splits.shifted_test.size(),
             config.output_dir);
  return EXIT_SUCCESS;
}

int Train(const ConfigFlags& flags, const std::string& method, std::uint64_t seed,
          const std::string& model_path) {
  const BenchmarkConfig config = flags.Resolve();
  const auto data = bdlbench::PrepareData(config);
  const auto model =
      bdlbench::TrainMethod(bdlbench::ParseMethodTag(method), config, data, seed);
  bdlbench::SaveCheckpoint(model, model_path);
  for (const auto& r : model.records) {
    fmt::print("member seed {}: {} epochs, final loss {:.6f}\n", r.seed, r.epochs, r.final_loss);
  }
  fmt::print("saved {} ({} trainable parameters) to {}\n", method,
             model.trainable_parameter_count(), model_path);
  return EXIT_SUCCESS;
}

int Evaluate(const ConfigFlags& flags, const std::string& model_path, const std::string& split,
             std::uint64_t seed, const std::string& out_path) {
  const BenchmarkConfig config = flags.Resolve();
  const auto data = bdlbench::PrepareData(config);
  const auto model = bdlbench::LoadCheckpoint(model_path);
  const auto tag = bdlbench::ParseSplitTag(split);
  const bdlbench::Dataset& dataset = tag == bdlbench::SplitTag::kShiftedTest ? data.shifted_test
                                     : tag == bdlbench::SplitTag::kVal       ? data.val
                                     : tag == bdlbench::SplitTag::kTrain     ? data.train
                                                                              : data.test;
  auto rng = bdlbench::MakeRng(seed, "sampling/" + split);
  const auto scored = bdlbench::ScoreModel(model, dataset, config.sampling, rng);
  const auto curve = bdlbench::ReferralSweep(scored, config.fractions);
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : curve.points) {
    points.push_back({{"fraction", p.fraction},
                      {"retained", p.retained},
                      {"accuracy", p.accuracy},
                      {"auc", p.auc ? nlohmann::json(*p.auc) : nlohmann::json(nullptr)}});
    fmt::print("r={:.2f} retained={} accuracy={:.4f} auc={}\n", p.fraction, p.retained,
               p.accuracy, p.auc ? fmt::format("{:.4f}", *p.auc) : "n/a");
  }
  if (!out_path.empty()) {
    const nlohmann::json j = {{"method", bdlbench::ToString(model.method)},
                              {"split", split},
                              {"points", points}};
    bdlbench::WriteTextFile(out_path, j.dump(2) + '\n');
  }
  return EXIT_SUCCESS;
}

void WriteOutputs(const bdlbench::BenchmarkReport& report, const std::string& dir) {
  bdlbench::EmitReport(report, dir);
  bdlbench::EmitPlotData(report, Path(dir, "plots"));
}

int Benchmark(const ConfigFlags& flags) {
  const BenchmarkConfig config = flags.Resolve();
  const auto run = bdlbench::RunBenchmark(config);
  WriteOutputs(run.report, config.output_dir);
  bdlbench::WriteTextFile(Path(config.output_dir, "timings.json"),
                          bdlbench::ToJson(run.timings).dump(2) + '\n');
  std::cout << bdlbench::ReportToMarkdown(run.report);
  for (const auto& m : run.report.methods) {
    for (const auto& f : m.failures) {
      fmt::print(stderr, "{} seed {} failed: {}\n", bdlbench::ToString(m.method), f.seed, f.error);
    }
  }
  fmt::print("report written to {} in {:.1f}s\n", config.output_dir, run.timings.total_seconds);
  return run.report.all_succeeded() ? EXIT_SUCCESS : kExitCellFailure;
}

int Report(const std::string& input, const std::string& out_dir) {
  const auto report = bdlbench::LoadReport(input);
  WriteOutputs(report, out_dir);
  std::cout << bdlbench::ReportToMarkdown(report);
  return report.all_succeeded() ? EXIT_SUCCESS : kExitCellFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark harness for uncertainty-aware referral"};
  app.require_subcommand(1);

  ConfigFlags gen_flags;
  auto* gen = app.add_subcommand("generate-data", "Write the synthetic splits as CSV");
  gen_flags.Register(gen);

  ConfigFlags train_flags;
  std::string train_method;
  std::uint64_t train_seed = 0;
  std::string train_out = "model.json";
  auto* train = app.add_subcommand("train", "Train one model and save a checkpoint");
  train_flags.Register(train);
  train->add_option("--method", train_method, "Method to train")->required();
  train->add_option("--seed", train_seed, "Training seed");
  train->add_option("--model", train_out, "Checkpoint path");

  ConfigFlags eval_flags;
  std::string eval_model;
  std::string eval_split = "test";
  std::uint64_t eval_seed = 0;
  std::string eval_out;
  auto* eval = app.add_subcommand("evaluate", "Referral curve of a saved checkpoint");
  eval_flags.Register(eval);
  eval->add_option("--model", eval_model, "Checkpoint path")->required()->check(CLI::ExistingFile);
  eval->add_option("--split", eval_split, "Split to evaluate")
      ->check(CLI::IsMember({"train", "val", "test", "shifted_test"}));
  eval->add_option("--seed", eval_seed, "Sampling seed");
  eval->add_option("--out", eval_out, "Write the curve as JSON");

  ConfigFlags bench_flags;
  auto* bench = app.add_subcommand("benchmark", "Run the (method, seed) grid and emit reports");
  bench_flags.Register(bench);

  std::string report_input;
  std::string report_out = "report_out";
  auto* report = app.add_subcommand("report", "Re-emit tables and plot data from report.json");
  report->add_option("--input", report_input, "report.json")->required()->check(CLI::ExistingFile);
  report->add_option("--output-dir", report_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return GenerateData(gen_flags);
    if (*train) return Train(train_flags, train_method, train_seed, train_out);
    if (*eval) return Evaluate(eval_flags, eval_model, eval_split, eval_seed, eval_out);
    if (*bench) return Benchmark(bench_flags);
    if (*report) return Report(report_input, report_out);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return EXIT_FAILURE;
  }
  return EXIT_FAILURE;
}
