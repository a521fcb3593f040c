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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "bdlbench/bench.hpp"
#include "bdlbench/checkpoint.hpp"
#include "bdlbench/data.hpp"
#include "bdlbench/errors.hpp"
#include "bdlbench/methods.hpp"
#include "bdlbench/metrics.hpp"
#include "bdlbench/random.hpp"
#include "bdlbench/report.hpp"

namespace py = pybind11;
using namespace bdlbench;

namespace {

// Configs and reports cross the boundary as JSON text; the Python package
// wraps them in dicts.
BenchmarkConfig ConfigFromText(const std::string& text) {
  BenchmarkConfig config;
  if (!text.empty()) config = BenchmarkConfigFromJson(nlohmann::json::parse(text));
  config.Validate();
  return config;
}

std::vector<std::string> RegionNames(const Dataset& d) {
  std::vector<std::string> out;
  out.reserve(d.regions.size());
  for (Region r : d.regions) out.emplace_back(ToString(r));
  return out;
}

ScoredPredictions MakeScored(const Vector& mean, const Vector& uncertainty,
                             const std::vector<int>& labels) {
  ScoredPredictions s{mean, uncertainty, labels};
  s.Validate();
  return s;
}

py::list CurveToList(const ReferralCurve& curve) {
  py::list out;
  for (const auto& p : curve.points) {
    py::dict d;
    d["fraction"] = p.fraction;
    d["retained"] = p.retained;
    d["accuracy"] = p.accuracy;
    d["auc"] = p.auc ? py::cast(*p.auc) : py::none();
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_bdlbench, m) {
  m.doc() = "Referral benchmark for predictive uncertainty";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<TrainingError>(m, "TrainingError", base.ptr());
  py::register_exception<UndefinedAucError>(m, "UndefinedAucError", base.ptr());
  py::register_exception<IncompatibleVersionError>(m, "IncompatibleVersionError", base.ptr());

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("features", &Dataset::features)
      .def_readonly("labels", &Dataset::labels)
      .def_property_readonly("split", [](const Dataset& d) { return std::string(ToString(d.split)); })
      .def_property_readonly("regions", &RegionNames)
      .def_readonly("seed", &Dataset::seed)
      .def_property_readonly("positive_fraction", &Dataset::positive_fraction)
      .def("__len__", &Dataset::size)
      .def("to_csv", &ToCsv);

  m.def("load_csv", [](const std::string& path) { return LoadCsv(path); }, py::arg("path"));

  m.def(
      "generate_synthetic",
      [](const std::string& generator_json, std::uint64_t seed) {
        const GeneratorSpec spec = generator_json.empty()
                                       ? GeneratorSpec{}
                                       : GeneratorSpecFromJson(nlohmann::json::parse(generator_json));
        auto s = GenerateSynthetic(spec, seed);
        py::dict out;
        out["train"] = std::move(s.train);
        out["val"] = std::move(s.val);
        out["test"] = std::move(s.test);
        out["shifted_test"] = std::move(s.shifted_test);
        return out;
      },
      py::arg("generator_json"), py::arg("seed"));

  m.def("resolve_config", [](const std::string& text) { return ToJson(ConfigFromText(text)).dump(); },
        py::arg("config_json"));

  py::class_<PreparedData>(m, "PreparedData")
      .def_readonly("train", &PreparedData::train)
      .def_readonly("val", &PreparedData::val)
      .def_readonly("test", &PreparedData::test)
      .def_readonly("shifted_test", &PreparedData::shifted_test);

  m.def("prepare_data", [](const std::string& text) { return PrepareData(ConfigFromText(text)); },
        py::arg("config_json"));

  py::class_<UncertaintyModel>(m, "Model")
      .def_property_readonly("method",
                             [](const UncertaintyModel& u) { return std::string(ToString(u.method)); })
      .def_property_readonly("parameter_count", &UncertaintyModel::trainable_parameter_count)
      .def_property_readonly("member_count", [](const UncertaintyModel& u) { return u.records.size(); })
      .def("to_json", &SerializeCheckpoint)
      .def_static("from_json", &DeserializeCheckpoint, py::arg("text"))
      .def("save", [](const UncertaintyModel& u, const std::string& path) { SaveCheckpoint(u, path); },
           py::arg("path"))
      .def_static("load", &LoadCheckpoint, py::arg("path"));

  m.def(
      "train",
      [](const std::string& method, const std::string& config_json, const PreparedData& data,
         std::uint64_t seed) {
        const auto config = ConfigFromText(config_json);
        py::gil_scoped_release release;
        return TrainMethod(ParseMethodTag(method), config, data, seed);
      },
      py::arg("method"), py::arg("config_json"), py::arg("data"), py::arg("seed"));

  m.def(
      "sample_predictive",
      [](const UncertaintyModel& model, const Matrix& features, std::size_t num_samples,
         std::size_t samples_per_member, std::uint64_t seed) {
        Rng rng = MakeRng(seed, "sampling/python");
        return SamplePredictive(model, features, {num_samples, samples_per_member}, rng)
            .probabilities;
      },
      py::arg("model"), py::arg("features"), py::arg("num_samples") = 100,
      py::arg("samples_per_member") = 33, py::arg("seed") = 0);

  m.def(
      "predictive_entropy", [](const Vector& p) { return PredictiveEntropy(p); }, py::arg("p"));

  m.def(
      "score_by_entropy",
      [](const Matrix& probabilities, const std::vector<int>& labels) {
        PredictiveSamples samples{probabilities, "python", 0};
        const auto s = ScoreByEntropy(samples, labels);
        return py::make_tuple(s.mean_probability, s.uncertainty);
      },
      py::arg("probabilities"), py::arg("labels"));

  m.def(
      "roc_auc",
      [](const std::vector<double>& scores, const std::vector<int>& labels) {
        const auto roc = RocAndAuc(std::span<const double>(scores), labels);
        std::vector<double> fpr, tpr;
        for (const auto& p : roc.points) {
          fpr.push_back(p.fpr);
          tpr.push_back(p.tpr);
        }
        return py::make_tuple(roc.auc, fpr, tpr);
      },
      py::arg("scores"), py::arg("labels"));

  m.def(
      "referral_sweep",
      [](const Vector& mean, const Vector& uncertainty, const std::vector<int>& labels,
         const std::vector<double>& fractions) {
        return CurveToList(ReferralSweep(MakeScored(mean, uncertainty, labels), fractions));
      },
      py::arg("mean_probability"), py::arg("uncertainty"), py::arg("labels"), py::arg("fractions"));

  m.def(
      "oracle_referral_curve",
      [](const Vector& mean, const std::vector<int>& labels, const std::vector<double>& fractions) {
        const Vector zeros = Vector::Zero(mean.size());
        return CurveToList(OracleReferralCurve(MakeScored(mean, zeros, labels), fractions));
      },
      py::arg("mean_probability"), py::arg("labels"), py::arg("fractions"));

  m.def("default_fractions", &DefaultRetentionFractions);

  m.def(
      "run_benchmark",
      [](const std::string& config_json) {
        const auto config = ConfigFromText(config_json);
        BenchmarkRun run;
        {
          py::gil_scoped_release release;
          run = RunBenchmark(config);
        }
        return py::make_tuple(ReportToJsonText(run.report), ToJson(run.timings).dump());
      },
      py::arg("config_json"));

  const auto parse_report = [](const std::string& text) {
    return BenchmarkReportFromJson(nlohmann::json::parse(text));
  };
  m.def(
      "report_to_markdown",
      [parse_report](const std::string& text) { return ReportToMarkdown(parse_report(text)); },
      py::arg("report_json"));
  m.def(
      "report_to_csv",
      [parse_report](const std::string& text) { return ReportToCsv(parse_report(text)); },
      py::arg("report_json"));
  m.def(
      "emit_report",
      [parse_report](const std::string& text, const std::string& dir) {
        const auto report = parse_report(text);
        EmitReport(report, dir);
        return EmitPlotData(report, dir + "/plots");
      },
      py::arg("report_json"), py::arg("output_dir"));

  m.attr("__version__") = BDLBENCH_VERSION;
}
