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
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "bdlbench/errors.hpp"

namespace bdlbench {
namespace {

TEST(Adam, ZeroGradientLeavesParameters) {
  AdamState state(3, AdamConfig{});
  std::vector<double> params = {1.0, -2.0, 0.5};
  const std::vector<double> grads(3, 0.0);
  AdamStep(state, params, grads);
  EXPECT_EQ(params, (std::vector<double>{1.0, -2.0, 0.5}));
  EXPECT_EQ(state.step, 1u);
}

TEST(Adam, FirstStepMovesBySignedLearningRate) {
  AdamConfig config;
  config.epsilon = 0.0;
  AdamState state(4, config);
  std::vector<double> params(4, 0.0);
  const std::vector<double> grads = {3.0, -0.01, 1e-6, -250.0};
  AdamStep(state, params, grads);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(params[i], -config.learning_rate * std::copysign(1.0, grads[i]), 1e-15);
  }
}

TEST(Adam, MatchesHandWrittenSecondStep) {
  AdamConfig config;
  AdamState state(1, config);
  std::vector<double> w = {0.0};
  AdamStep(state, w, std::vector<double>{1.0});
  AdamStep(state, w, std::vector<double>{-2.0});
  double m = 0.0;
  double v = 0.0;
  double expected = 0.0;
  const double g[] = {1.0, -2.0};
  for (int t = 1; t <= 2; ++t) {
    m = 0.9 * m + 0.1 * g[t - 1];
    v = 0.999 * v + 0.001 * g[t - 1] * g[t - 1];
    const double mh = m / (1.0 - std::pow(0.9, t));
    const double vh = v / (1.0 - std::pow(0.999, t));
    expected -= config.learning_rate * mh / (std::sqrt(vh) + config.epsilon);
  }
  EXPECT_NEAR(w[0], expected, 1e-16);
}

TEST(Adam, IdenticalStreamsIdenticalTrajectories) {
  AdamState a(2, AdamConfig{});
  AdamState b(2, AdamConfig{});
  std::vector<double> pa = {0.3, 0.7};
  std::vector<double> pb = pa;
  for (int t = 0; t < 50; ++t) {
    const std::vector<double> g = {std::sin(t), std::cos(3.0 * t)};
    AdamStep(a, pa, g);
    AdamStep(b, pb, g);
  }
  EXPECT_EQ(pa, pb);
  EXPECT_EQ(a.first_moment, b.first_moment);
  EXPECT_EQ(a.second_moment, b.second_moment);
}

TEST(Adam, NonFiniteGradientNamesIndex) {
  AdamState state(3, AdamConfig{});
  std::vector<double> params = {1.0, 2.0, 3.0};
  const std::vector<double> grads = {0.1, std::numeric_limits<double>::quiet_NaN(), 0.2};
  try {
    AdamStep(state, params, grads);
    FAIL() << "expected ArgumentError";
  } catch (const ArgumentError& e) {
    EXPECT_NE(std::string(e.what()).find('1'), std::string::npos);
  }
  EXPECT_EQ(params, (std::vector<double>{1.0, 2.0, 3.0}));
  EXPECT_EQ(state.step, 0u);
}

TEST(Adam, SizeMismatchIsShapeError) {
  AdamState state(3, AdamConfig{});
  std::vector<double> params(2, 0.0);
  EXPECT_THROW(AdamStep(state, params, std::vector<double>(2, 0.0)), ShapeError);
}

TEST(Adam, LayeredOverloadAgreesWithFlat) {
  const NetworkSpec spec({2, 3, 1});
  ParameterSet p = ParameterSet::Zeros(spec);
  GradientSet g = GradientSet::Zeros(spec);
  auto gflat = g.Flatten();
  for (std::size_t i = 0; i < gflat.size(); ++i) gflat[i] = 0.1 * static_cast<double>(i) - 0.5;
  g.Assign(gflat);
  AdamState s1(p.size(), AdamConfig{});
  AdamState s2(p.size(), AdamConfig{});
  auto flat = p.Flatten();
  AdamStep(s1, p, g);
  AdamStep(s2, flat, gflat);
  EXPECT_EQ(p.Flatten(), flat);
}

}  // namespace
}  // namespace bdlbench
