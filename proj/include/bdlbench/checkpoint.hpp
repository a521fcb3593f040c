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

#ifndef BDLBENCH_CHECKPOINT_HPP_
#define BDLBENCH_CHECKPOINT_HPP_

#include <string>

#include <json.hpp>

#include "bdlbench/methods.hpp"
#include "bdlbench/network.hpp"

namespace bdlbench {

inline constexpr int kCheckpointFormatVersion = 1;

nlohmann::json ToJson(const NetworkSpec& spec);
NetworkSpec NetworkSpecFromJson(const nlohmann::json& j);

// {"weights": [row-major], "bias": [...]} per layer.
nlohmann::json ToJson(const ParameterSet& params);
ParameterSet ParameterSetFromJson(const nlohmann::json& j, const NetworkSpec& spec);

nlohmann::json ToJson(const UncertaintyModel& model);
// Throws IncompatibleVersionError for other format versions and ParseError
// for anything malformed; never returns a partially filled model.
UncertaintyModel ModelFromJson(const nlohmann::json& j);

std::string SerializeCheckpoint(const UncertaintyModel& model);
UncertaintyModel DeserializeCheckpoint(const std::string& text);
void SaveCheckpoint(const UncertaintyModel& model, const std::string& path);
UncertaintyModel LoadCheckpoint(const std::string& path);

}  // namespace bdlbench

#endif  // BDLBENCH_CHECKPOINT_HPP_
