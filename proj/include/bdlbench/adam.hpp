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

#ifndef BDLBENCH_ADAM_HPP_
#define BDLBENCH_ADAM_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bdlbench/network.hpp"

namespace bdlbench {

struct AdamConfig {
  double learning_rate = 4e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moments live in flat parameter order (see LayeredParams::Flatten).
struct AdamState {
  AdamState(std::size_t num_params, AdamConfig config);

  AdamConfig config;
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::uint64_t step = 0;
};

// Bias-corrected Adam update in place. Throws ArgumentError naming the flat
// index of the first non-finite gradient (parameters are left untouched) and
// ShapeError when sizes disagree.
void AdamStep(AdamState& state, std::span<double> params, std::span<const double> grads);
void AdamStep(AdamState& state, ParameterSet& params, const GradientSet& grads);

}  // namespace bdlbench

#endif  // BDLBENCH_ADAM_HPP_
