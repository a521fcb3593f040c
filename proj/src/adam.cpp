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

#include "bdlbench/adam.hpp"

#include <cmath>

#include <fmt/format.h>

#include "bdlbench/errors.hpp"

namespace bdlbench {

AdamState::AdamState(std::size_t num_params, AdamConfig config)
    : config(config), first_moment(num_params, 0.0), second_moment(num_params, 0.0) {
  if (!(config.learning_rate > 0.0) || !(config.beta1 >= 0.0 && config.beta1 < 1.0) ||
      !(config.beta2 >= 0.0 && config.beta2 < 1.0) || !(config.epsilon >= 0.0)) {
    throw ArgumentError("invalid Adam hyperparameters");
  }
}

void AdamStep(AdamState& state, std::span<double> params, std::span<const double> grads) {
  const std::size_t n = state.first_moment.size();
  if (params.size() != n || grads.size() != n) {
    throw ShapeError(fmt::format("Adam state has {} entries, params {}, grads {}", n,
                                 params.size(), grads.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(grads[i])) {
      throw ArgumentError(fmt::format("non-finite gradient at parameter index {}", i));
    }
  }
  const auto& c = state.config;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(c.beta1, t);
  const double bias2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < n; ++i) {
    double& m = state.first_moment[i];
    double& v = state.second_moment[i];
    m = c.beta1 * m + (1.0 - c.beta1) * grads[i];
    v = c.beta2 * v + (1.0 - c.beta2) * grads[i] * grads[i];
    const double m_hat = m / bias1;
    const double v_hat = v / bias2;
    params[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
  }
}

void AdamStep(AdamState& state, ParameterSet& params, const GradientSet& grads) {
  std::vector<double> flat = params.Flatten();
  const std::vector<double> flat_grads = grads.Flatten();
  AdamStep(state, flat, flat_grads);
  params.Assign(flat);
}

}  // namespace bdlbench
