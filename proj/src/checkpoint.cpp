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

#include "bdlbench/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "bdlbench/errors.hpp"

namespace bdlbench {

using nlohmann::json;

namespace {

template <typename M>
json FlatArray(const M& m) {
  return json(std::vector<double>(m.data(), m.data() + m.size()));
}

template <typename M>
void ReadFlat(const json& j, const char* key, M& target) {
  const auto values = j.at(key).get<std::vector<double>>();
  if (values.size() != static_cast<std::size_t>(target.size())) {
    throw ParseError(fmt::format("'{}' has {} values, expected {}", key, values.size(),
                                 target.size()));
  }
  std::copy(values.begin(), values.end(), target.data());
}

json ToJson(const TrainingRecord& r) {
  return {{"seed", r.seed}, {"epochs", r.epochs}, {"final_loss", r.final_loss}};
}

TrainingRecord RecordFromJson(const json& j) {
  return {j.at("seed").get<std::uint64_t>(), j.at("epochs").get<std::size_t>(),
          j.at("final_loss").get<double>()};
}

}  // namespace

json ToJson(const NetworkSpec& spec) {
  return {{"layer_sizes", spec.layer_sizes()},
          {"leaky_slope", spec.leaky_slope()},
          {"dropout_rate", spec.dropout_rate()},
          {"l2_coefficient", spec.l2_coefficient()}};
}

NetworkSpec NetworkSpecFromJson(const json& j) {
  return NetworkSpec(j.at("layer_sizes").get<std::vector<std::size_t>>(),
                     j.at("leaky_slope").get<double>(), j.at("dropout_rate").get<double>(),
                     j.at("l2_coefficient").get<double>());
}

json ToJson(const ParameterSet& params) {
  json layers = json::array();
  for (const auto& l : params.layers) {
    layers.push_back({{"weights", FlatArray(l.weights)}, {"bias", FlatArray(l.bias)}});
  }
  return layers;
}

ParameterSet ParameterSetFromJson(const json& j, const NetworkSpec& spec) {
  if (!j.is_array() || j.size() != spec.num_layers()) {
    throw ParseError(fmt::format("expected {} parameter layers", spec.num_layers()));
  }
  auto params = ParameterSet::Zeros(spec);
  for (std::size_t l = 0; l < spec.num_layers(); ++l) {
    ReadFlat(j[l], "weights", params.layers[l].weights);
    ReadFlat(j[l], "bias", params.layers[l].bias);
  }
  if (!params.AllFinite()) throw ParseError("checkpoint contains non-finite parameters");
  return params;
}

json ToJson(const UncertaintyModel& model) {
  json j = {{"format_version", kCheckpointFormatVersion},
            {"method_tag", ToString(model.method)},
            {"spec", ToJson(model.spec)}};
  json training = json::array();
  for (const auto& r : model.records) training.push_back(ToJson(r));
  j["training"] = std::move(training);
  if (model.variational) {
    json layers = json::array();
    for (const auto& l : model.variational->layers) {
      layers.push_back({{"weight_mean", FlatArray(l.weight_mean)},
                        {"weight_rho", FlatArray(l.weight_rho)},
                        {"bias_mean", FlatArray(l.bias_mean)},
                        {"bias_rho", FlatArray(l.bias_rho)}});
    }
    j["variational"] = {{"prior_sigma", model.variational->prior_sigma}, {"layers", layers}};
  } else {
    json members = json::array();
    for (const auto& m : model.members) members.push_back(ToJson(m));
    j["members"] = std::move(members);
  }
  return j;
}

UncertaintyModel ModelFromJson(const json& j) {
  try {
    if (!j.is_object() || !j.contains("format_version")) {
      throw ParseError("checkpoint lacks format_version");
    }
    const int version = j.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion) {
      throw IncompatibleVersionError(fmt::format(
          "checkpoint format_version {} is incompatible with {}", version, kCheckpointFormatVersion));
    }
    UncertaintyModel model;
    model.method = ParseMethodTag(j.at("method_tag").get<std::string>());
    model.spec = NetworkSpecFromJson(j.at("spec"));
    for (const auto& r : j.at("training")) model.records.push_back(RecordFromJson(r));

    if (model.method == MethodTag::kMfvi) {
      const auto& v = j.at("variational");
      VariationalParams params;
      params.prior_sigma = v.at("prior_sigma").get<double>();
      const auto& layers = v.at("layers");
      if (layers.size() != model.spec.num_layers()) throw ParseError("variational layer count mismatch");
      for (std::size_t l = 0; l < model.spec.num_layers(); ++l) {
        const auto out = static_cast<Eigen::Index>(model.spec.fan_out(l));
        const auto in = static_cast<Eigen::Index>(model.spec.fan_in(l));
        VariationalLayer layer{Matrix(out, in), Matrix(out, in), Vector(out), Vector(out)};
        ReadFlat(layers[l], "weight_mean", layer.weight_mean);
        ReadFlat(layers[l], "weight_rho", layer.weight_rho);
        ReadFlat(layers[l], "bias_mean", layer.bias_mean);
        ReadFlat(layers[l], "bias_rho", layer.bias_rho);
        params.layers.push_back(std::move(layer));
      }
      model.variational = std::move(params);
    } else {
      for (const auto& m : j.at("members")) {
        model.members.push_back(ParameterSetFromJson(m, model.spec));
      }
      if (model.members.empty()) throw ParseError("checkpoint has no members");
    }
    return model;
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("malformed checkpoint: {}", e.what()));
  } catch (const ArgumentError& e) {
    throw ParseError(fmt::format("malformed checkpoint: {}", e.what()));
  }
}

std::string SerializeCheckpoint(const UncertaintyModel& model) { return ToJson(model).dump(1); }

UncertaintyModel DeserializeCheckpoint(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("checkpoint is not valid JSON: {}", e.what()));
  }
  return ModelFromJson(j);
}

void SaveCheckpoint(const UncertaintyModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path));
  out << SerializeCheckpoint(model) << '\n';
  if (!out) throw IoError(fmt::format("write to '{}' failed", path));
}

UncertaintyModel LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return DeserializeCheckpoint(buffer.str());
}

}  // namespace bdlbench
