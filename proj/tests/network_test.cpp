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

#include "bdlbench/network.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "bdlbench/errors.hpp"
#include "test_util.hpp"

namespace bdlbench {
namespace {

using testing::CentralDifference;
using testing::RandomLabels;
using testing::RandomMatrix;
using testing::RelativeError;

double TotalLoss(const NetworkSpec& spec, const ParameterSet& params, const Matrix& batch,
                 std::span<const int> labels, const ClassFrequencies& freqs,
                 const DropoutMasks& masks) {
  const ForwardPass pass = ForwardWithMasks(spec, params, batch, masks);
  double loss = WeightedCrossEntropy(pass.probabilities, labels, freqs);
  for (const auto& layer : params.layers) loss += spec.l2_coefficient() * layer.weights.squaredNorm();
  return loss;
}

TEST(NetworkSpec, RejectsDegenerateShapes) {
  EXPECT_THROW(NetworkSpec({3}), ArgumentError);
  EXPECT_THROW(NetworkSpec({3, 0, 1}), ArgumentError);
  EXPECT_THROW(NetworkSpec({3, 1}, 0.2, 1.0), ArgumentError);
  EXPECT_THROW(NetworkSpec({3, 1}, 0.2, -0.1), ArgumentError);
  EXPECT_THROW(NetworkSpec({3, 1}, 0.2, 0.0, -1.0), ArgumentError);
}

TEST(NetworkSpec, CountsParameters) {
  const NetworkSpec spec({2, 32, 32, 1});
  EXPECT_EQ(spec.weight_count(), 2u * 32 + 32 * 32 + 32);
  EXPECT_EQ(spec.parameter_count(), spec.weight_count() + 32 + 32 + 1);
  EXPECT_EQ(ParameterSet::Zeros(spec).size(), spec.parameter_count());
}

TEST(Glorot, SmallLayerBoundIsOne) {
  const NetworkSpec spec({3, 3, 1});
  Rng rng = MakeRng(1, "test");
  const ParameterSet p = GlorotUniformInit(spec, rng);
  EXPECT_DOUBLE_EQ(GlorotBound(3, 3), 1.0);
  EXPECT_LE(p.layers[0].weights.cwiseAbs().maxCoeff(), 1.0);
  EXPECT_TRUE(p.layers[0].bias.isZero());
}

TEST(Glorot, WideLayerBound) {
  EXPECT_NEAR(GlorotBound(100, 200), 0.14142, 1e-5);
  const NetworkSpec spec({100, 200, 1});
  Rng rng = MakeRng(2, "test");
  const ParameterSet p = GlorotUniformInit(spec, rng);
  EXPECT_LE(p.layers[0].weights.cwiseAbs().maxCoeff(), GlorotBound(100, 200));
  // The draws fill the interval rather than collapsing near zero.
  EXPECT_GT(p.layers[0].weights.cwiseAbs().maxCoeff(), 0.9 * GlorotBound(100, 200));
}

TEST(Glorot, SameSeedSameParameters) {
  const NetworkSpec spec({4, 8, 1});
  Rng a = MakeRng(7, "init");
  Rng b = MakeRng(7, "init");
  EXPECT_EQ(GlorotUniformInit(spec, a), GlorotUniformInit(spec, b));
  Rng c = MakeRng(8, "init");
  Rng d = MakeRng(7, "init");
  EXPECT_FALSE(GlorotUniformInit(spec, c) == GlorotUniformInit(spec, d));
}

TEST(Forward, ZeroNetworkGivesHalf) {
  const NetworkSpec spec({3, 5, 1});
  Rng rng = MakeRng(3, "test");
  const Matrix x = RandomMatrix(6, 3, rng);
  const ForwardPass pass = Forward(spec, ParameterSet::Zeros(spec), x, Mode::kEval);
  for (Eigen::Index i = 0; i < pass.probabilities.size(); ++i) {
    EXPECT_EQ(pass.probabilities[i], 0.5);
  }
}

TEST(Forward, SingleUnitHandValue) {
  const NetworkSpec spec({1, 1}, 0.2);
  ParameterSet p = ParameterSet::Zeros(spec);
  p.layers[0].weights(0, 0) = 2.0;
  const Matrix x = Matrix::Constant(1, 1, 1.0);
  const double expected = 1.0 / (1.0 + std::exp(-2.0));
  EXPECT_NEAR(Forward(spec, p, x, Mode::kEval).probabilities[0], expected, 1e-15);
  EXPECT_NEAR(expected, 0.8808, 1e-4);
}

TEST(Forward, LeakyHiddenUnits) {
  EXPECT_EQ(LeakyRelu(3.0, 0.2), 3.0);
  EXPECT_DOUBLE_EQ(LeakyRelu(-3.0, 0.2), -0.6);
  EXPECT_EQ(Sigmoid(0.0), 0.5);
  EXPECT_GT(Sigmoid(-800.0), -1e-300);
  EXPECT_LE(Sigmoid(800.0), 1.0);
}

TEST(Forward, InvertedDropoutScalesSurvivors) {
  const NetworkSpec spec({1, 4000, 1}, 0.2, 0.999);
  Rng rng = MakeRng(4, "test");
  const Matrix x = Matrix::Constant(3, 1, 1.0);
  const ParameterSet p = ParameterSet::Zeros(spec);
  const ForwardPass pass = Forward(spec, p, x, Mode::kTrain, &rng);
  ASSERT_EQ(pass.masks.size(), 1u);
  std::size_t survivors = 0;
  for (Eigen::Index i = 0; i < pass.masks[0].size(); ++i) {
    const double m = pass.masks[0].data()[i];
    if (m != 0.0) {
      EXPECT_NEAR(m, 1000.0, 1e-9);
      ++survivors;
    }
  }
  EXPECT_LT(survivors, 60u);
}

TEST(Forward, TrainModeNeedsRng) {
  const NetworkSpec spec({2, 3, 1}, 0.2, 0.5);
  EXPECT_THROW(Forward(spec, ParameterSet::Zeros(spec), Matrix::Zero(2, 2), Mode::kTrain),
               ArgumentError);
}

TEST(Forward, ShapeErrorsNameTheLayer) {
  const NetworkSpec spec({2, 3, 1});
  try {
    Forward(spec, ParameterSet::Zeros(spec), Matrix::Zero(4, 5), Mode::kEval);
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    EXPECT_NE(std::string(e.what()).find("layer 0"), std::string::npos);
  }
  ParameterSet bad = ParameterSet::Zeros(spec);
  bad.layers[1].weights = Matrix::Zero(1, 4);
  try {
    Forward(spec, bad, Matrix::Zero(4, 2), Mode::kEval);
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    EXPECT_NE(std::string(e.what()).find("layer 1"), std::string::npos);
  }
}

TEST(WeightedCrossEntropy, BalancedPairAtHalf) {
  const Vector p = Vector::Constant(2, 0.5);
  const std::vector<int> y = {0, 1};
  const auto freqs = ClassFrequencies::FromLabels(y);
  EXPECT_DOUBLE_EQ(freqs[0], 0.5);
  EXPECT_NEAR(WeightedCrossEntropy(p, y, freqs), std::log(2.0), 1e-15);
  // -(1/(K n)) * sum log(0.5) / 0.5, written out.
  EXPECT_NEAR(WeightedCrossEntropy(p, y, freqs), -(1.0 / 4.0) * 2.0 * std::log(0.5) / 0.5, 1e-15);
}

TEST(WeightedCrossEntropy, PerfectPredictionsNearZero) {
  const std::vector<int> y = {1, 0, 0, 0};
  Vector p(4);
  p << 1.0, 0.0, 0.0, 0.0;
  const auto freqs = ClassFrequencies::FromLabels(y);
  const double bound = -std::log(1.0 - kProbabilityClamp) / (2.0 * 0.25);
  const double loss = WeightedCrossEntropy(p, y, freqs);
  EXPECT_GE(loss, 0.0);
  EXPECT_LE(loss, bound);
}

TEST(WeightedCrossEntropy, InvariantUnderDuplication) {
  Rng rng = MakeRng(5, "test");
  const std::vector<int> y = {1, 0, 0, 1, 0};
  Vector p(5);
  for (Eigen::Index i = 0; i < 5; ++i) p[i] = 0.05 + 0.9 * UniformUnit(rng);
  std::vector<int> y2 = y;
  y2.insert(y2.end(), y.begin(), y.end());
  Vector p2(10);
  p2 << p, p;
  EXPECT_NEAR(WeightedCrossEntropy(p, y, ClassFrequencies::FromLabels(y)),
              WeightedCrossEntropy(p2, y2, ClassFrequencies::FromLabels(y2)), 1e-14);
}

TEST(WeightedCrossEntropy, RejectsAbsentClassFrequency) {
  const std::vector<int> y = {1, 1};
  ClassFrequencies freqs;
  freqs.values = {1.0, 0.0};
  EXPECT_THROW(WeightedCrossEntropy(Vector::Constant(2, 0.5), y, freqs), ArgumentError);
}

TEST(Backward, ZeroNetworkOutputBias) {
  const NetworkSpec spec({3, 4, 1});
  Rng rng = MakeRng(6, "test");
  const Matrix x = RandomMatrix(8, 3, rng);
  const std::vector<int> y = {0, 1, 0, 0, 1, 0, 0, 0};
  const auto freqs = ClassFrequencies::FromLabels(y);
  const ParameterSet p = ParameterSet::Zeros(spec);
  const auto result = Backward(spec, p, x, y, freqs, Mode::kEval);
  // dL/db = sum_i (0.5 - y_i) / (K n freq(y_i)).
  double expected = 0.0;
  for (int yi : y) expected += (0.5 - yi) / (2.0 * 8.0 * freqs[yi]);
  EXPECT_NEAR(result.gradient.layers[1].bias[0], expected, 1e-15);
  const auto loss = [&](std::span<const double> flat) {
    ParameterSet q = p;
    q.Assign(flat);
    return TotalLoss(spec, q, x, y, freqs, {});
  };
  const auto flat = p.Flatten();
  const std::size_t bias_index = flat.size() - 1;
  EXPECT_NEAR(CentralDifference(loss, flat, bias_index), expected, 1e-9);
}

TEST(Backward, L2Contribution) {
  const NetworkSpec spec({1, 1}, 0.2, 0.0, 0.1);
  ParameterSet p = ParameterSet::Zeros(spec);
  p.layers[0].weights(0, 0) = 2.0;
  // Zero input makes the data gradient with respect to the weight vanish.
  const Matrix x = Matrix::Zero(2, 1);
  const std::vector<int> y = {0, 1};
  const auto result = Backward(spec, p, x, y, ClassFrequencies::FromLabels(y), Mode::kEval);
  EXPECT_NEAR(result.gradient.layers[0].weights(0, 0), 0.4, 1e-15);
  EXPECT_NEAR(result.loss, std::log(2.0) + 0.4, 1e-15);
}

class GradientCheck : public ::testing::TestWithParam<int> {};

TEST_P(GradientCheck, MatchesCentralDifferences) {
  Rng rng = MakeRng(static_cast<std::uint64_t>(GetParam()), "gradient_check");
  const std::size_t layers = 1 + UniformIndex(rng, 3);
  std::vector<std::size_t> sizes{1 + UniformIndex(rng, 5)};
  for (std::size_t l = 1; l < layers; ++l) sizes.push_back(1 + UniformIndex(rng, 20));
  sizes.push_back(1);
  const bool dropout = GetParam() % 2 == 1 && layers > 1;
  const NetworkSpec spec(sizes, 0.2, dropout ? 0.3 : 0.0, 0.01);
  ParameterSet p = GlorotUniformInit(spec, rng);
  for (auto& layer : p.layers) {
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias[i] = 0.1 * StandardNormal(rng);
  }
  const Eigen::Index n = 12;
  const Matrix x = RandomMatrix(n, static_cast<Eigen::Index>(sizes[0]), rng);
  const auto y = RandomLabels(static_cast<std::size_t>(n), rng);
  const auto freqs = ClassFrequencies::FromLabels(y);
  const DropoutMasks masks = dropout ? DrawDropoutMasks(spec, n, rng) : DropoutMasks{};

  const auto analytic = BackwardWithMasks(spec, p, x, y, freqs, masks);
  EXPECT_NEAR(analytic.loss, TotalLoss(spec, p, x, y, freqs, masks), 1e-14);
  const auto loss = [&](std::span<const double> flat) {
    ParameterSet q = p;
    q.Assign(flat);
    return TotalLoss(spec, q, x, y, freqs, masks);
  };
  const auto flat = p.Flatten();
  const auto grad = analytic.gradient.Flatten();
  for (std::size_t i = 0; i < flat.size(); ++i) {
    EXPECT_LT(RelativeError(grad[i], CentralDifference(loss, flat, i)), 1e-4) << "parameter " << i;
  }
}

INSTANTIATE_TEST_SUITE_P(RandomNetworks, GradientCheck, ::testing::Range(0, 10));

}  // namespace
}  // namespace bdlbench
