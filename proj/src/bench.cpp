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

#include "bdlbench/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "bdlbench/errors.hpp"

namespace bdlbench {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

namespace {

std::string_view ToString(Estimator e) { return e == Estimator::kFlipout ? "flipout" : "naive"; }
Estimator ParseEstimator(std::string_view s) {
  if (s == "flipout") return Estimator::kFlipout;
  if (s == "naive") return Estimator::kNaive;
  throw ArgumentError(fmt::format("unknown estimator '{}'", s));
}
std::string_view ToString(KlMode m) { return m == KlMode::kClosedForm ? "closed_form" : "sampled"; }
KlMode ParseKlMode(std::string_view s) {
  if (s == "closed_form") return KlMode::kClosedForm;
  if (s == "sampled") return KlMode::kSampled;
  throw ArgumentError(fmt::format("unknown KL mode '{}'", s));
}

void CheckGrid(const std::vector<double>& grid, std::string_view name) {
  if (grid.empty()) throw ArgumentError(fmt::format("{} is empty", name));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] <= 1.0)) {
      throw ArgumentError(fmt::format("{} value {} lies outside (0,1]", name, grid[i]));
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ArgumentError(fmt::format("{} must be strictly increasing", name));
    }
  }
}

// splitmix64 finalizer; spreads ensemble member seeds away from neighbouring
// cells' seeds.
std::uint64_t MixSeed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void BenchmarkConfig::Validate() const {
  if (n_seeds == 0) throw ArgumentError("n_seeds must be at least 1");
  if (methods.empty()) throw ArgumentError("no methods selected");
  std::set<MethodTag> seen(methods.begin(), methods.end());
  if (seen.size() != methods.size()) throw ArgumentError("duplicate method in config");
  if (sampling.num_samples < 1 || sampling.samples_per_member < 1) {
    throw ArgumentError("sample counts must be at least 1");
  }
  if (ensemble_members < 2) throw ArgumentError("ensemble_members must be at least 2");
  if (ensemble_mc_dropout_members < 1) {
    throw ArgumentError("ensemble_mc_dropout_members must be at least 1");
  }
  if (workers < 1) throw ArgumentError("workers must be at least 1");
  if (train.batch_size < 2) throw ArgumentError("batch_size must be at least 2");
  if (train.max_epochs < 1) throw ArgumentError("max_epochs must be at least 1");
  CheckGrid(fractions, "fractions");
  CheckGrid(table_fractions, "table_fractions");
  CheckGrid(roc_fractions, "roc_fractions");
  for (double f : table_fractions) {
    if (std::find(fractions.begin(), fractions.end(), f) == fractions.end()) {
      throw ArgumentError(fmt::format("table fraction {} is not on the fraction grid", f));
    }
  }
  NetworkSpec probe = MakeNetworkSpec(generator.dim);
  const bool needs_dropout = seen.count(MethodTag::kMcDropout) > 0 ||
                             seen.count(MethodTag::kEnsembleMcDropout) > 0;
  if (needs_dropout && !(probe.dropout_rate() > 0.0)) {
    throw ArgumentError("dropout-sampling methods need dropout_rate > 0");
  }
  if (!csv) generator.Validate();
}

NetworkSpec BenchmarkConfig::MakeNetworkSpec(std::size_t input_dim) const {
  std::vector<std::size_t> sizes{input_dim};
  sizes.insert(sizes.end(), hidden_sizes.begin(), hidden_sizes.end());
  sizes.push_back(1);
  return NetworkSpec(std::move(sizes), leaky_slope, dropout_rate, l2_coefficient);
}

json ToJson(const BenchmarkConfig& c) {
  json methods = json::array();
  for (auto m : c.methods) methods.push_back(ToString(m));
  json j = {
      {"format_version", kConfigFormatVersion},
      {"methods", methods},
      {"n_seeds", c.n_seeds},
      {"base_seed", c.base_seed},
      {"num_samples", c.sampling.num_samples},
      {"samples_per_member", c.sampling.samples_per_member},
      {"hidden_sizes", c.hidden_sizes},
      {"leaky_slope", c.leaky_slope},
      {"dropout_rate", c.dropout_rate},
      {"l2_coefficient", c.l2_coefficient},
      {"learning_rate", c.train.adam.learning_rate},
      {"adam_beta1", c.train.adam.beta1},
      {"adam_beta2", c.train.adam.beta2},
      {"adam_epsilon", c.train.adam.epsilon},
      {"batch_size", c.train.batch_size},
      {"max_epochs", c.train.max_epochs},
      {"patience", c.train.patience},
      {"mfvi_prior_sigma", c.mfvi.prior_sigma},
      {"mfvi_init_sigma_factor", c.mfvi.init_sigma_factor},
      {"mfvi_estimator", ToString(c.mfvi.estimator)},
      {"mfvi_kl_mode", ToString(c.mfvi.kl_mode)},
      {"mfvi_match_parameter_budget", c.mfvi.match_parameter_budget},
      {"ensemble_members", c.ensemble_members},
      {"ensemble_mc_dropout_members", c.ensemble_mc_dropout_members},
      {"fractions", c.fractions},
      {"table_fractions", c.table_fractions},
      {"roc_fractions", c.roc_fractions},
      {"generator", ToJson(c.generator)},
      {"normalize", c.normalize},
      {"output_dir", c.output_dir},
      {"workers", c.workers},
  };
  if (c.csv) {
    j["csv"] = {{"train", c.csv->train},
                {"val", c.csv->val},
                {"test", c.csv->test},
                {"shifted_test", c.csv->shifted_test}};
  } else {
    j["csv"] = nullptr;
  }
  return j;
}

BenchmarkConfig BenchmarkConfigFromJson(const json& j, const BenchmarkConfig& base) {
  BenchmarkConfig c = base;
  try {
    if (!j.is_object()) throw ParseError("config must be a JSON object");
    if (j.contains("format_version") && j.at("format_version").get<int>() != kConfigFormatVersion) {
      throw IncompatibleVersionError(fmt::format("config format_version {} is not supported",
                                                 j.at("format_version").get<int>()));
    }
    auto read = [&j](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto& m : j.at("methods")) c.methods.push_back(ParseMethodTag(m.get<std::string>()));
    }
    read("n_seeds", c.n_seeds);
    read("base_seed", c.base_seed);
    read("num_samples", c.sampling.num_samples);
    read("samples_per_member", c.sampling.samples_per_member);
    read("hidden_sizes", c.hidden_sizes);
    read("leaky_slope", c.leaky_slope);
    read("dropout_rate", c.dropout_rate);
    read("l2_coefficient", c.l2_coefficient);
    read("learning_rate", c.train.adam.learning_rate);
    read("adam_beta1", c.train.adam.beta1);
    read("adam_beta2", c.train.adam.beta2);
    read("adam_epsilon", c.train.adam.epsilon);
    read("batch_size", c.train.batch_size);
    read("max_epochs", c.train.max_epochs);
    read("patience", c.train.patience);
    read("mfvi_prior_sigma", c.mfvi.prior_sigma);
    read("mfvi_init_sigma_factor", c.mfvi.init_sigma_factor);
    if (j.contains("mfvi_estimator")) c.mfvi.estimator = ParseEstimator(j.at("mfvi_estimator").get<std::string>());
    if (j.contains("mfvi_kl_mode")) c.mfvi.kl_mode = ParseKlMode(j.at("mfvi_kl_mode").get<std::string>());
    read("mfvi_match_parameter_budget", c.mfvi.match_parameter_budget);
    read("ensemble_members", c.ensemble_members);
    read("ensemble_mc_dropout_members", c.ensemble_mc_dropout_members);
    read("fractions", c.fractions);
    read("table_fractions", c.table_fractions);
    read("roc_fractions", c.roc_fractions);
    if (j.contains("generator")) c.generator = GeneratorSpecFromJson(j.at("generator"));
    read("normalize", c.normalize);
    read("output_dir", c.output_dir);
    read("workers", c.workers);
    if (j.contains("csv")) {
      const auto& s = j.at("csv");
      if (s.is_null()) {
        c.csv.reset();
      } else {
        CsvSource src;
        src.train = s.at("train").get<std::string>();
        src.val = s.value("val", std::string());
        src.test = s.at("test").get<std::string>();
        src.shifted_test = s.at("shifted_test").get<std::string>();
        c.csv = src;
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("benchmark config: {}", e.what()));
  }
  return c;
}

std::uint64_t CellSeed(const BenchmarkConfig& config, MethodTag method, std::size_t seed_index) {
  const auto all = AllMethods();
  const auto method_index = static_cast<std::uint64_t>(
      std::find(all.begin(), all.end(), method) - all.begin());
  return config.base_seed + method_index * 1000 + seed_index;
}

// ---------------------------------------------------------------------------
// Data and training

PreparedData PrepareData(const BenchmarkConfig& config) {
  PreparedData data;
  if (config.csv) {
    CsvSchema schema;
    data.train = LoadCsv(config.csv->train, schema);
    if (config.csv->val.empty()) {
      auto [train, val] = SplitTrainVal(data.train, 0.2, config.base_seed);
      data.train = std::move(train);
      data.val = std::move(val);
    } else {
      schema.default_split = SplitTag::kVal;
      data.val = LoadCsv(config.csv->val, schema);
    }
    schema.default_split = SplitTag::kTest;
    data.test = LoadCsv(config.csv->test, schema);
    schema.default_split = SplitTag::kShiftedTest;
    data.shifted_test = LoadCsv(config.csv->shifted_test, schema);
    data.train.split = SplitTag::kTrain;
    data.val.split = SplitTag::kVal;
    data.test.split = SplitTag::kTest;
    data.shifted_test.split = SplitTag::kShiftedTest;
  } else {
    auto splits = GenerateSynthetic(config.generator, config.base_seed);
    data.train = std::move(splits.train);
    data.val = std::move(splits.val);
    data.test = std::move(splits.test);
    data.shifted_test = std::move(splits.shifted_test);
  }
  for (const Dataset* d : {&data.train, &data.val, &data.test, &data.shifted_test}) d->Validate();
  if (config.normalize) {
    data.normalization = FitNormalization(data.train);
    data.train = ApplyNormalization(data.normalization, data.train);
    data.val = ApplyNormalization(data.normalization, data.val);
    data.test = ApplyNormalization(data.normalization, data.test);
    data.shifted_test = ApplyNormalization(data.normalization, data.shifted_test);
  }
  return data;
}

UncertaintyModel TrainMethod(MethodTag method, const BenchmarkConfig& config,
                             const PreparedData& data, std::uint64_t seed) {
  const NetworkSpec spec = config.MakeNetworkSpec(data.train.dim());
  const Dataset* val = config.train.patience > 0 ? &data.val : nullptr;
  switch (method) {
    case MethodTag::kDeterministic:
      return TrainDeterministic(spec, data.train, config.train, seed, val);
    case MethodTag::kMcDropout:
      return TrainMcDropout(spec, data.train, config.train, seed, val);
    case MethodTag::kRandom:
      return TrainRandomBaseline(spec, data.train, config.train, seed, val);
    case MethodTag::kMfvi:
      return TrainMfvi(spec, data.train, config.train, config.mfvi, seed, val);
    case MethodTag::kDeepEnsemble:
      return TrainDeepEnsemble(spec, data.train, config.train, config.ensemble_members,
                               MixSeed(seed), val);
    case MethodTag::kEnsembleMcDropout:
      return TrainEnsembleMcDropout(spec, data.train, config.train,
                                    config.ensemble_mc_dropout_members, MixSeed(seed), val);
  }
  throw ArgumentError("unknown method");
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

SplitEvaluation Evaluate(const BenchmarkConfig& config, const UncertaintyModel& model,
                         const Dataset& data, Rng& rng) {
  const ScoredPredictions scored = ScoreModel(model, data, config.sampling, rng);
  SplitEvaluation eval;
  eval.curve = ReferralSweep(scored, config.fractions);
  eval.oracle = OracleReferralCurve(scored, config.fractions);

  const auto order = RetentionOrder(scored.uncertainty);
  for (double r : config.roc_fractions) {
    const std::size_t keep = RetainedCount(r, scored.size());
    std::vector<std::size_t> kept(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
    std::sort(kept.begin(), kept.end());
    Vector means(static_cast<Eigen::Index>(keep));
    std::vector<int> labels(keep);
    for (std::size_t i = 0; i < keep; ++i) {
      means[static_cast<Eigen::Index>(i)] = scored.mean_probability[static_cast<Eigen::Index>(kept[i])];
      labels[i] = scored.labels[kept[i]];
    }
    try {
      RocSnapshot snap{r, RocAndAuc(means, labels), std::nullopt};
      snap.operating_point = FindOperatingPoint(snap.roc);
      eval.rocs.push_back(std::move(snap));
    } catch (const UndefinedAucError&) {
    }
  }

  const Vector entropy = PredictiveEntropy(scored.mean_probability);
  std::map<std::string, std::pair<double, std::size_t>> sums;
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto& s = sums[std::string(ToString(data.regions[i]))];
    s.first += entropy[static_cast<Eigen::Index>(i)];
    ++s.second;
  }
  for (const auto& [region, s] : sums) {
    eval.mean_entropy_by_region[region] = s.first / static_cast<double>(s.second);
  }
  return eval;
}

}  // namespace

CellResult RunCell(const BenchmarkConfig& config, const PreparedData& data, MethodTag method,
                   std::size_t seed_index) {
  CellResult cell;
  cell.method = method;
  cell.seed_index = seed_index;
  cell.seed = CellSeed(config, method, seed_index);
  const auto start = std::chrono::steady_clock::now();
  try {
    const UncertaintyModel model = TrainMethod(method, config, data, cell.seed);
    cell.parameter_count = model.trainable_parameter_count();
    Rng test_rng = MakeRng(cell.seed, "sampling/test");
    cell.test = Evaluate(config, model, data.test, test_rng);
    Rng shifted_rng = MakeRng(cell.seed, "sampling/shifted_test");
    cell.shifted_test = Evaluate(config, model, data.shifted_test, shifted_rng);
    cell.ok = true;
  } catch (const std::exception& e) {
    cell.ok = false;
    cell.error = e.what();
  }
  cell.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return cell;
}

bool BenchmarkReport::all_succeeded() const {
  for (const auto& m : methods) {
    if (!m.failures.empty() || !m.test.ok || !m.shifted_test.ok) return false;
  }
  return true;
}

const MethodReport* BenchmarkReport::Find(MethodTag method) const {
  for (const auto& m : methods) {
    if (m.method == method) return &m;
  }
  return nullptr;
}

namespace {

SplitReport Assemble(const std::vector<const CellResult*>& cells,
                     SplitEvaluation CellResult::*split) {
  SplitReport report;
  std::vector<ReferralCurve> curves;
  std::vector<ReferralCurve> oracles;
  for (const CellResult* c : cells) {
    const SplitEvaluation& e = c->*split;
    curves.push_back(e.curve);
    oracles.push_back(e.oracle);
    if (report.rocs.empty()) report.rocs = e.rocs;
    std::vector<std::optional<OperatingPoint>> points;
    for (const auto& snap : e.rocs) points.push_back(snap.operating_point);
    report.operating_points.push_back(std::move(points));
    for (const auto& [region, h] : e.mean_entropy_by_region) {
      report.mean_entropy_by_region[region].push_back(h);
    }
  }
  if (curves.empty()) {
    report.ok = false;
    report.error = "no seed completed";
    return report;
  }
  report.curve = AggregateSeeds(curves);
  report.oracle = AggregateSeeds(oracles);
  report.ok = true;
  return report;
}

}  // namespace

BenchmarkRun RunBenchmark(const BenchmarkConfig& config, const PreparedData& data) {
  config.Validate();
  const auto start = std::chrono::steady_clock::now();
  struct Job {
    MethodTag method;
    std::size_t seed_index;
  };
  std::vector<Job> jobs;
  for (auto m : config.methods) {
    for (std::size_t s = 0; s < config.n_seeds; ++s) jobs.push_back({m, s});
  }
  std::vector<CellResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      results[j] = RunCell(config, data, jobs[j].method, jobs[j].seed_index);
    }
  };
  const std::size_t n_threads = std::min(config.workers, jobs.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  }

  BenchmarkRun run;
  run.report.config = config;
  for (const auto& cell : results) {
    run.timings.cells.emplace_back(cell.method, cell.seed_index, cell.wall_seconds);
  }
  for (auto m : config.methods) {
    MethodReport mr;
    mr.method = m;
    std::vector<const CellResult*> ok_cells;
    for (const auto& cell : results) {
      if (cell.method != m) continue;
      if (cell.ok) {
        ok_cells.push_back(&cell);
        mr.seeds.push_back(cell.seed);
        if (mr.parameter_count == 0) mr.parameter_count = cell.parameter_count;
      } else {
        mr.failures.push_back({cell.seed_index, cell.seed, cell.error});
      }
    }
    mr.test = Assemble(ok_cells, &CellResult::test);
    mr.shifted_test = Assemble(ok_cells, &CellResult::shifted_test);
    if (ok_cells.empty() && !mr.failures.empty()) {
      mr.test.error = mr.shifted_test.error = mr.failures.front().error;
    }
    run.report.methods.push_back(std::move(mr));
  }
  run.timings.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

BenchmarkRun RunBenchmark(const BenchmarkConfig& config) {
  config.Validate();
  return RunBenchmark(config, PrepareData(config));
}

// ---------------------------------------------------------------------------
// Report serialization

namespace {

json OptionalDouble(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
std::optional<double> ReadOptional(const json& j) {
  return j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
}

json ToJson(const std::optional<OperatingPoint>& p) {
  if (!p) return nullptr;
  return {{"sensitivity", p->sensitivity},
          {"specificity", p->specificity},
          {"meets_target", p->meets_target}};
}

std::optional<OperatingPoint> OperatingPointFromJson(const json& j) {
  if (j.is_null()) return std::nullopt;
  return OperatingPoint{j.at("sensitivity").get<double>(), j.at("specificity").get<double>(),
                        j.at("meets_target").get<bool>()};
}

json ToJson(const AggregatedCurve& curve) {
  json points = json::array();
  for (const auto& p : curve.points) {
    json auc_seeds = json::array();
    for (const auto& a : p.auc_per_seed) auc_seeds.push_back(OptionalDouble(a));
    points.push_back({{"fraction", p.fraction},
                      {"accuracy_mean", p.accuracy.mean},
                      {"accuracy_stderr", p.accuracy.standard_error},
                      {"auc_mean", p.auc ? json(p.auc->mean) : json(nullptr)},
                      {"auc_stderr", p.auc ? json(p.auc->standard_error) : json(nullptr)},
                      {"accuracy_per_seed", p.accuracy_per_seed},
                      {"auc_per_seed", auc_seeds}});
  }
  return points;
}

AggregatedCurve AggregatedCurveFromJson(const json& j) {
  AggregatedCurve curve;
  for (const auto& p : j) {
    AggregatedPoint point{p.at("fraction").get<double>(),
                          {p.at("accuracy_mean").get<double>(), p.at("accuracy_stderr").get<double>()},
                          std::nullopt,
                          p.at("accuracy_per_seed").get<std::vector<double>>(),
                          {}};
    if (!p.at("auc_mean").is_null()) {
      point.auc = MeanStderr{p.at("auc_mean").get<double>(), p.at("auc_stderr").get<double>()};
    }
    for (const auto& a : p.at("auc_per_seed")) point.auc_per_seed.push_back(ReadOptional(a));
    curve.points.push_back(std::move(point));
  }
  return curve;
}

json ToJson(const RocSnapshot& snap) {
  std::vector<double> fpr;
  std::vector<double> tpr;
  for (const auto& p : snap.roc.points) {
    fpr.push_back(p.fpr);
    tpr.push_back(p.tpr);
  }
  return {{"fraction", snap.fraction},
          {"auc", snap.roc.auc},
          {"fpr", fpr},
          {"tpr", tpr},
          {"operating_point", ToJson(snap.operating_point)}};
}

RocSnapshot RocSnapshotFromJson(const json& j) {
  RocSnapshot snap{j.at("fraction").get<double>(), {}, OperatingPointFromJson(j.at("operating_point"))};
  snap.roc.auc = j.at("auc").get<double>();
  const auto fpr = j.at("fpr").get<std::vector<double>>();
  const auto tpr = j.at("tpr").get<std::vector<double>>();
  if (fpr.size() != tpr.size()) throw ParseError("ROC fpr/tpr lengths differ");
  for (std::size_t i = 0; i < fpr.size(); ++i) snap.roc.points.push_back({fpr[i], tpr[i]});
  return snap;
}

json ToJson(const SplitReport& s) {
  json rocs = json::array();
  for (const auto& r : s.rocs) rocs.push_back(ToJson(r));
  json ops = json::array();
  for (const auto& seed_points : s.operating_points) {
    json row = json::array();
    for (const auto& p : seed_points) row.push_back(ToJson(p));
    ops.push_back(std::move(row));
  }
  return {{"status", s.ok ? "ok" : "failed"},
          {"error", s.error},
          {"curve", ToJson(s.curve)},
          {"oracle_curve", ToJson(s.oracle)},
          {"roc", rocs},
          {"operating_points", ops},
          {"mean_entropy_by_region", s.mean_entropy_by_region}};
}

SplitReport SplitReportFromJson(const json& j) {
  SplitReport s;
  s.ok = j.at("status").get<std::string>() == "ok";
  s.error = j.at("error").get<std::string>();
  s.curve = AggregatedCurveFromJson(j.at("curve"));
  s.oracle = AggregatedCurveFromJson(j.at("oracle_curve"));
  for (const auto& r : j.at("roc")) s.rocs.push_back(RocSnapshotFromJson(r));
  for (const auto& row : j.at("operating_points")) {
    std::vector<std::optional<OperatingPoint>> points;
    for (const auto& p : row) points.push_back(OperatingPointFromJson(p));
    s.operating_points.push_back(std::move(points));
  }
  s.mean_entropy_by_region =
      j.at("mean_entropy_by_region").get<std::map<std::string, std::vector<double>>>();
  return s;
}

}  // namespace

json ToJson(const BenchmarkReport& report) {
  json config = ToJson(report.config);
  // Execution details that must not influence report bytes.
  config.erase("workers");
  config.erase("output_dir");
  json methods = json::array();
  for (const auto& m : report.methods) {
    json failures = json::array();
    for (const auto& f : m.failures) {
      failures.push_back({{"seed_index", f.seed_index}, {"seed", f.seed}, {"error", f.error}});
    }
    methods.push_back({{"method", ToString(m.method)},
                       {"parameter_count", m.parameter_count},
                       {"seeds", m.seeds},
                       {"failures", failures},
                       {"splits", {{"test", ToJson(m.test)}, {"shifted_test", ToJson(m.shifted_test)}}}});
  }
  return {{"format_version", report.format_version}, {"config", config}, {"methods", methods}};
}

BenchmarkReport BenchmarkReportFromJson(const json& j) {
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kReportFormatVersion) {
      throw IncompatibleVersionError(fmt::format("report format_version {} is not supported", version));
    }
    BenchmarkReport report;
    report.config = BenchmarkConfigFromJson(j.at("config"));
    for (const auto& m : j.at("methods")) {
      MethodReport mr;
      mr.method = ParseMethodTag(m.at("method").get<std::string>());
      mr.parameter_count = m.at("parameter_count").get<std::size_t>();
      mr.seeds = m.at("seeds").get<std::vector<std::uint64_t>>();
      for (const auto& f : m.at("failures")) {
        mr.failures.push_back({f.at("seed_index").get<std::size_t>(), f.at("seed").get<std::uint64_t>(),
                               f.at("error").get<std::string>()});
      }
      mr.test = SplitReportFromJson(m.at("splits").at("test"));
      mr.shifted_test = SplitReportFromJson(m.at("splits").at("shifted_test"));
      report.methods.push_back(std::move(mr));
    }
    return report;
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("malformed report: {}", e.what()));
  }
}

json ToJson(const BenchmarkTimings& timings) {
  json cells = json::array();
  for (const auto& [method, seed_index, seconds] : timings.cells) {
    cells.push_back({{"method", ToString(method)}, {"seed_index", seed_index}, {"seconds", seconds}});
  }
  return {{"cells", cells}, {"total_seconds", timings.total_seconds}};
}

}  // namespace bdlbench
