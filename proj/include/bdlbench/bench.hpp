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

#ifndef BDLBENCH_BENCH_HPP_
#define BDLBENCH_BENCH_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "bdlbench/data.hpp"
#include "bdlbench/methods.hpp"
#include "bdlbench/metrics.hpp"

namespace bdlbench {

inline constexpr int kReportFormatVersion = 1;
inline constexpr int kConfigFormatVersion = 1;

// CSV inputs; when set they replace the generator.
struct CsvSource {
  std::string train;
  std::string val;  // optional: empty means split train 80/20
  std::string test;
  std::string shifted_test;

  friend bool operator==(const CsvSource&, const CsvSource&) = default;
};

struct BenchmarkConfig {
  std::vector<MethodTag> methods = AllMethods();
  std::size_t n_seeds = 9;
  std::uint64_t base_seed = 0;
  SamplingConfig sampling;

  std::vector<std::size_t> hidden_sizes = {32, 32};
  double leaky_slope = 0.2;
  double dropout_rate = 0.2;
  double l2_coefficient = 5e-5;
  TrainConfig train;
  MfviConfig mfvi;
  std::size_t ensemble_members = 5;
  std::size_t ensemble_mc_dropout_members = 3;

  std::vector<double> fractions = DefaultRetentionFractions();
  std::vector<double> table_fractions = {0.5, 0.7, 1.0};
  std::vector<double> roc_fractions = {0.6, 0.9, 1.0};

  GeneratorSpec generator;
  std::optional<CsvSource> csv;
  bool normalize = true;

  std::string output_dir = "bench_out";
  std::size_t workers = 1;

  // Throws ArgumentError for n_seeds == 0, duplicate methods, bad grids...
  void Validate() const;
  // Network shared by every method (MFVI narrows it further).
  NetworkSpec MakeNetworkSpec(std::size_t input_dim) const;
};

nlohmann::json ToJson(const BenchmarkConfig& config);
// Keys absent from `j` keep the values of `base`.
BenchmarkConfig BenchmarkConfigFromJson(const nlohmann::json& j, const BenchmarkConfig& base = {});

// base_seed + method_index * 1000 + seed_index, method_index from the
// canonical AllMethods() order.
std::uint64_t CellSeed(const BenchmarkConfig& config, MethodTag method, std::size_t seed_index);

struct PreparedData {
  Dataset train;
  Dataset val;
  Dataset test;
  Dataset shifted_test;
  NormalizationStats normalization;
};

// Generates or loads the four splits and normalizes them with train stats.
PreparedData PrepareData(const BenchmarkConfig& config);

// Trains one model of any method with the benchmark's recipe.
UncertaintyModel TrainMethod(MethodTag method, const BenchmarkConfig& config,
                             const PreparedData& data, std::uint64_t seed);

struct RocSnapshot {
  double fraction;
  RocCurve roc;
  std::optional<OperatingPoint> operating_point;
};

// One (method, seed) evaluation on one split.
struct SplitEvaluation {
  ReferralCurve curve;
  ReferralCurve oracle;
  std::vector<RocSnapshot> rocs;
  std::map<std::string, double> mean_entropy_by_region;  // region name -> nats
};

struct CellResult {
  MethodTag method;
  std::size_t seed_index;
  std::uint64_t seed;
  bool ok = false;
  std::string error;
  std::size_t parameter_count = 0;
  SplitEvaluation test;
  SplitEvaluation shifted_test;
  double wall_seconds = 0.0;
};

// Trains and evaluates a single cell; exceptions become ok=false.
CellResult RunCell(const BenchmarkConfig& config, const PreparedData& data, MethodTag method,
                   std::size_t seed_index);

struct SplitReport {
  bool ok = false;
  std::string error;
  AggregatedCurve curve;
  AggregatedCurve oracle;  // ceiling
  // ROC curves of the first successful seed.
  std::vector<RocSnapshot> rocs;
  // Operating points of every successful seed at each roc fraction.
  std::vector<std::vector<std::optional<OperatingPoint>>> operating_points;
  std::map<std::string, std::vector<double>> mean_entropy_by_region;  // per seed
};

struct SeedFailure {
  std::size_t seed_index;
  std::uint64_t seed;
  std::string error;
};

struct MethodReport {
  MethodTag method;
  std::size_t parameter_count = 0;
  std::vector<std::uint64_t> seeds;  // successful seeds, ascending seed index
  std::vector<SeedFailure> failures;
  SplitReport test;
  SplitReport shifted_test;
};

struct BenchmarkReport {
  int format_version = kReportFormatVersion;
  BenchmarkConfig config;
  std::vector<MethodReport> methods;

  bool all_succeeded() const;
  const MethodReport* Find(MethodTag method) const;
};

nlohmann::json ToJson(const BenchmarkReport& report);
BenchmarkReport BenchmarkReportFromJson(const nlohmann::json& j);  // version-checked

// Wall-clock numbers live outside the report so that reports stay byte-stable.
struct BenchmarkTimings {
  std::vector<std::tuple<MethodTag, std::size_t, double>> cells;  // method, seed index, seconds
  double total_seconds = 0.0;
};
nlohmann::json ToJson(const BenchmarkTimings& timings);

struct BenchmarkRun {
  BenchmarkReport report;
  BenchmarkTimings timings;
};

// Runs the (method, seed) grid on config.workers threads. The report does not
// depend on the worker count; failed cells are recorded, not rethrown.
BenchmarkRun RunBenchmark(const BenchmarkConfig& config);
BenchmarkRun RunBenchmark(const BenchmarkConfig& config, const PreparedData& data);

}  // namespace bdlbench

#endif  // BDLBENCH_BENCH_HPP_
