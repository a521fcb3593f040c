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

#include "bdlbench/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "bdlbench/errors.hpp"
#include "test_util.hpp"

namespace bdlbench {
namespace {

// Pairwise Mann-Whitney statistic: P(score+ > score-) + 0.5 P(tie).
double MannWhitney(std::span<const double> scores, std::span<const int> labels) {
  long long twice = 0;
  long long pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      twice += scores[i] > scores[j] ? 2 : scores[i] == scores[j] ? 1 : 0;
    }
  }
  return static_cast<double>(twice) / (2.0 * static_cast<double>(pairs));
}

ScoredPredictions Scored(std::vector<double> mean, std::vector<double> uncertainty,
                         std::vector<int> labels) {
  ScoredPredictions s;
  s.mean_probability = Eigen::Map<Vector>(mean.data(), static_cast<Eigen::Index>(mean.size()));
  s.uncertainty =
      Eigen::Map<Vector>(uncertainty.data(), static_cast<Eigen::Index>(uncertainty.size()));
  s.labels = std::move(labels);
  return s;
}

// Straightforward re-implementation: stable sort, take the first ceil(rN).
ReferralCurve NaiveSweep(const ScoredPredictions& s, std::span<const double> fractions) {
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return s.uncertainty[static_cast<Eigen::Index>(a)] < s.uncertainty[static_cast<Eigen::Index>(b)];
  });
  ReferralCurve curve;
  for (double r : fractions) {
    const auto keep = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(r * static_cast<double>(s.size()) - 1e-9)));
    std::vector<std::size_t> kept(order.begin(), order.begin() + static_cast<long>(keep));
    std::sort(kept.begin(), kept.end());
    std::vector<double> means;
    std::vector<int> labels;
    std::size_t correct = 0;
    for (std::size_t i : kept) {
      const double p = s.mean_probability[static_cast<Eigen::Index>(i)];
      means.push_back(p);
      labels.push_back(s.labels[i]);
      correct += (p >= 0.5 ? 1 : 0) == s.labels[i];
    }
    ReferralPoint point{r, keep, static_cast<double>(correct) / static_cast<double>(keep),
                        std::nullopt};
    const bool both = std::count(labels.begin(), labels.end(), 1) > 0 &&
                      std::count(labels.begin(), labels.end(), 0) > 0;
    if (both) point.auc = MannWhitney(means, labels);
    curve.points.push_back(point);
  }
  return curve;
}

TEST(PredictiveMean, Examples) {
  PredictiveSamples s;
  s.probabilities = Matrix(2, 1);
  s.probabilities << 0.2, 0.4;
  EXPECT_NEAR(PredictiveMean(s)[0], 0.3, 1e-16);
  s.probabilities = Matrix(1, 3);
  s.probabilities << 0.1, 0.5, 0.9;
  EXPECT_EQ(PredictiveMean(s), Vector(s.probabilities.row(0).transpose()));
  s.probabilities = Matrix::Constant(7, 2, 0.37);
  EXPECT_NEAR(PredictiveMean(s)[1], 0.37, 1e-16);
}

TEST(PredictiveSamples, ValidateRejectsClosedEndpoints) {
  PredictiveSamples s;
  s.probabilities = Matrix::Constant(2, 2, 0.5);
  s.Validate();
  s.probabilities(1, 1) = 1.0;
  EXPECT_THROW(s.Validate(), ArgumentError);
  s.probabilities = Matrix(0, 3);
  EXPECT_THROW(s.Validate(), ArgumentError);
}

TEST(PredictiveEntropy, Examples) {
  EXPECT_NEAR(PredictiveEntropy(0.5), std::log(2.0), 1e-15);
  EXPECT_EQ(PredictiveEntropy(0.0), 0.0);
  EXPECT_EQ(PredictiveEntropy(1.0), 0.0);
  const double expected = -(0.3 * std::log(0.3) + 0.7 * std::log(0.7));
  EXPECT_NEAR(PredictiveEntropy(0.3), expected, 1e-15);
  EXPECT_NEAR(PredictiveEntropy(0.3), 0.6109, 1e-4);
  EXPECT_THROW(PredictiveEntropy(1.5), ArgumentError);
}

TEST(PredictiveEntropy, SymmetricAndBounded) {
  for (int i = 0; i <= 10000; ++i) {
    const double p = i / 10000.0;
    const double h = PredictiveEntropy(p);
    EXPECT_NEAR(h, PredictiveEntropy(1.0 - p), 1e-12);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, std::log(2.0) + 1e-15);
  }
}

TEST(RocAndAuc, Examples) {
  const std::vector<int> y = {1, 1, 0, 0};
  EXPECT_EQ(RocAndAuc(std::vector<double>{0.9, 0.8, 0.3, 0.1}, y).auc, 1.0);
  EXPECT_EQ(RocAndAuc(std::vector<double>{0.5, 0.5, 0.5, 0.5}, y).auc, 0.5);
  EXPECT_EQ(RocAndAuc(std::vector<double>{0.1, 0.4, 0.35, 0.8}, std::vector<int>{0, 0, 1, 1}).auc,
            0.75);
}

TEST(RocAndAuc, EndpointsAndMonotone) {
  Rng rng = MakeRng(2, "test");
  std::vector<double> scores(50);
  for (auto& s : scores) s = std::round(10.0 * UniformUnit(rng)) / 10.0;
  const auto labels = testing::RandomLabels(50, rng);
  const auto roc = RocAndAuc(scores, labels);
  ASSERT_GE(roc.points.size(), 2u);
  EXPECT_EQ(roc.points.front().fpr, 0.0);
  EXPECT_EQ(roc.points.front().tpr, 0.0);
  EXPECT_EQ(roc.points.back().fpr, 1.0);
  EXPECT_EQ(roc.points.back().tpr, 1.0);
  for (std::size_t i = 1; i < roc.points.size(); ++i) {
    EXPECT_GE(roc.points[i].fpr, roc.points[i - 1].fpr);
    EXPECT_GE(roc.points[i].tpr, roc.points[i - 1].tpr);
  }
}

TEST(RocAndAuc, SingleClassIsUndefined) {
  EXPECT_THROW(RocAndAuc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}), UndefinedAucError);
  EXPECT_THROW(RocAndAuc(std::vector<double>{0.1}, std::vector<int>{1, 0}), ShapeError);
}

TEST(RocAndAuc, EqualsMannWhitney) {
  Rng rng = MakeRng(3, "auc_oracle");
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + UniformIndex(rng, 199);
    const bool ties = trial % 2 == 0;
    std::vector<double> scores(n);
    for (auto& s : scores) s = ties ? static_cast<double>(UniformIndex(rng, 5)) : UniformUnit(rng);
    const auto labels = testing::RandomLabels(n, rng);
    EXPECT_NEAR(RocAndAuc(scores, labels).auc, MannWhitney(scores, labels), 1e-12);
  }
}

TEST(BinaryAccuracy, Examples) {
  const std::vector<int> y = {1, 0};
  EXPECT_EQ(BinaryAccuracy(Vector::Constant(2, 0.6), y), 0.5);
  Vector perfect(2);
  perfect << 0.99, 0.01;
  EXPECT_EQ(BinaryAccuracy(perfect, y), 1.0);
  EXPECT_EQ(BinaryAccuracy(Vector::Constant(1, 0.5), std::vector<int>{1}), 1.0);
  EXPECT_THROW(BinaryAccuracy(Vector(0), std::vector<int>{}), ArgumentError);
}

TEST(RetainedCount, CeilingConvention) {
  EXPECT_EQ(RetainedCount(0.5, 10), 5u);
  EXPECT_EQ(RetainedCount(0.5, 11), 6u);
  EXPECT_EQ(RetainedCount(0.7, 10), 7u);  // 0.7 * 10 is 7.000000000000001
  EXPECT_EQ(RetainedCount(1.0, 10), 10u);
  EXPECT_EQ(RetainedCount(0.01, 10), 1u);
}

TEST(ReferralSweep, RetainsLeastUncertain) {
  // Correctness [wrong, right, wrong, right].
  const auto s = Scored({0.2, 0.9, 0.8, 0.1}, {0.9, 0.1, 0.5, 0.2}, {1, 1, 0, 0});
  const std::vector<double> r = {0.5, 1.0};
  const auto curve = ReferralSweep(s, r);
  EXPECT_EQ(curve.points[0].retained, 2u);
  EXPECT_EQ(curve.points[0].accuracy, 1.0);
  EXPECT_EQ(curve.points[1].accuracy, 0.5);
  EXPECT_EQ(*curve.points[1].auc, RocAndAuc(s.mean_probability, s.labels).auc);
}

TEST(ReferralSweep, TiesKeepOriginalOrder) {
  const auto s = Scored({0.9, 0.1, 0.9, 0.1, 0.9}, {0.3, 0.3, 0.3, 0.3, 0.3}, {1, 1, 0, 0, 1});
  const std::vector<double> r = {0.4};
  const auto curve = ReferralSweep(s, r);
  // First two indices: labels {1, 1}, predictions {1, 0}.
  EXPECT_EQ(curve.points[0].retained, 2u);
  EXPECT_EQ(curve.points[0].accuracy, 0.5);
  EXPECT_FALSE(curve.points[0].auc.has_value());
  EXPECT_EQ(RetentionOrder(s.uncertainty), (std::vector<std::size_t>{0, 1, 2, 3, 4}));
}

TEST(ReferralSweep, RejectsBadGrid) {
  const auto s = Scored({0.9, 0.1}, {0.1, 0.2}, {1, 0});
  EXPECT_THROW(ReferralSweep(s, std::vector<double>{0.0}), ArgumentError);
  EXPECT_THROW(ReferralSweep(s, std::vector<double>{0.8, 0.5}), ArgumentError);
  EXPECT_THROW(ReferralSweep(s, std::vector<double>{1.2}), ArgumentError);
}

TEST(ReferralSweep, MatchesNaiveImplementation) {
  Rng rng = MakeRng(4, "referral");
  const auto grid = DefaultRetentionFractions();
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + UniformIndex(rng, 40);
    std::vector<double> mean(n);
    std::vector<double> unc(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      mean[i] = UniformUnit(rng);
      unc[i] = static_cast<double>(UniformIndex(rng, 4));
      labels[i] = Bernoulli(rng, 0.4);
    }
    const auto s = Scored(mean, unc, labels);
    const auto fast = ReferralSweep(s, grid);
    const auto naive = NaiveSweep(s, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      EXPECT_EQ(fast.points[k].retained, naive.points[k].retained);
      EXPECT_EQ(fast.points[k].accuracy, naive.points[k].accuracy);
      EXPECT_EQ(fast.points[k].auc, naive.points[k].auc);
    }
  }
}

TEST(OracleReferral, Examples) {
  std::array<bool, 10> correct;
  correct.fill(true);
  correct[2] = correct[7] = false;
  const std::vector<double> r = {0.8, 1.0};
  const auto curve = OracleReferralCurve(correct, r);
  EXPECT_EQ(curve.points[0].accuracy, 1.0);
  EXPECT_EQ(curve.points[1].accuracy, 0.8);
}

TEST(OracleReferral, ScoredOverloadRefersErrors) {
  const auto s = Scored({0.9, 0.2, 0.7, 0.4}, {0.0, 0.0, 0.0, 0.0}, {1, 1, 0, 0});
  const std::vector<double> r = {0.5, 1.0};
  const auto oracle = OracleReferralCurve(s, r);
  EXPECT_EQ(oracle.points[0].accuracy, 1.0);
  EXPECT_EQ(oracle.points[1].accuracy, 0.5);
}

// Every referral order of every correctness pattern with n <= 6.
TEST(OracleReferral, PointwiseMaximalBruteForce) {
  const auto grid = DefaultRetentionFractions();
  for (std::size_t n = 1; n <= 6; ++n) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      std::array<bool, 8> correct{};
      for (std::size_t i = 0; i < n; ++i) correct[i] = (mask >> i) & 1u;
      const auto oracle = OracleReferralCurve(std::span<const bool>(correct.data(), n), grid);
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::vector<double> best(grid.size(), 0.0);
      do {
        for (std::size_t k = 0; k < grid.size(); ++k) {
          const std::size_t keep = RetainedCount(grid[k], n);
          std::size_t hits = 0;
          for (std::size_t i = 0; i < keep; ++i) hits += correct[perm[i]];
          best[k] = std::max(best[k], static_cast<double>(hits) / static_cast<double>(keep));
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      for (std::size_t k = 0; k < grid.size(); ++k) {
        EXPECT_EQ(oracle.points[k].accuracy, best[k]) << "n=" << n << " mask=" << mask;
      }
    }
  }
}

RocCurve Diagonal(int steps) {
  RocCurve roc;
  for (int i = 0; i <= steps; ++i) {
    const double v = static_cast<double>(i) / steps;
    roc.points.push_back({v, v});
  }
  roc.auc = 0.5;
  return roc;
}

TEST(OperatingPoint, Examples) {
  const auto perfect = RocAndAuc(std::vector<double>{0.9, 0.8, 0.2, 0.1}, std::vector<int>{1, 1, 0, 0});
  const auto p = FindOperatingPoint(perfect);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->sensitivity, 1.0);
  EXPECT_EQ(p->specificity, 1.0);
  EXPECT_TRUE(p->meets_target);

  const auto chance = FindOperatingPoint(Diagonal(20));
  ASSERT_TRUE(chance.has_value());
  EXPECT_NEAR(chance->sensitivity, 0.85, 1e-12);
  EXPECT_NEAR(chance->specificity, 0.15, 1e-12);
  EXPECT_FALSE(chance->meets_target);

  RocCurve sparse;
  sparse.points = {{0.0, 0.0}, {0.1, 0.5}, {0.6, 0.8}, {1.0, 1.0}};
  const auto endpoint = FindOperatingPoint(sparse);
  ASSERT_TRUE(endpoint.has_value());
  EXPECT_EQ(endpoint->sensitivity, 1.0);
  EXPECT_EQ(endpoint->specificity, 0.0);
  EXPECT_FALSE(endpoint->meets_target);

  RocCurve truncated;
  truncated.points = {{0.0, 0.0}, {0.5, 0.5}};
  EXPECT_FALSE(FindOperatingPoint(truncated).has_value());
}

TEST(Summarize, SampleStandardError) {
  const std::vector<double> v = {80.0, 82.0, 84.0};
  const auto s = Summarize(v);
  EXPECT_DOUBLE_EQ(s.mean, 82.0);
  EXPECT_NEAR(s.standard_error, 2.0 / std::sqrt(3.0), 1e-12);
  EXPECT_EQ(Summarize(std::vector<double>{5.0, 5.0, 5.0}).standard_error, 0.0);
  EXPECT_EQ(Summarize(std::vector<double>{5.0}).standard_error, 0.0);
  EXPECT_THROW(Summarize(std::vector<double>{}), ArgumentError);
}

TEST(AggregateSeeds, MeansAndMissingAuc) {
  ReferralCurve a{{{0.5, 5, 0.80, 0.9}, {1.0, 10, 0.70, std::nullopt}}};
  ReferralCurve b{{{0.5, 5, 0.82, 0.8}, {1.0, 10, 0.72, std::nullopt}}};
  ReferralCurve c{{{0.5, 5, 0.84, std::nullopt}, {1.0, 10, 0.74, 0.6}}};
  const std::vector<ReferralCurve> curves = {a, b, c};
  const auto agg = AggregateSeeds(curves);
  ASSERT_EQ(agg.points.size(), 2u);
  EXPECT_NEAR(agg.points[0].accuracy.mean, 0.82, 1e-15);
  EXPECT_NEAR(agg.points[0].accuracy.standard_error, 0.02 / std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(agg.points[0].auc->mean, 0.85, 1e-15);
  EXPECT_EQ(agg.points[1].auc->mean, 0.6);
  EXPECT_EQ(agg.points[0].accuracy_per_seed, (std::vector<double>{0.80, 0.82, 0.84}));
  EXPECT_FALSE(agg.points[0].auc_per_seed[2].has_value());

  ReferralCurve other{{{0.6, 6, 0.8, 0.9}, {1.0, 10, 0.7, 0.9}}};
  const std::vector<ReferralCurve> mismatched = {a, other};
  EXPECT_THROW(AggregateSeeds(mismatched), ArgumentError);
  EXPECT_THROW(AggregateSeeds(std::vector<ReferralCurve>{}), ArgumentError);
}

}  // namespace
}  // namespace bdlbench
