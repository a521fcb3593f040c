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

#ifndef BDLBENCH_METRICS_HPP_
#define BDLBENCH_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bdlbench/network.hpp"

namespace bdlbench {

// T x N matrix of sampled class-1 probabilities: one row per stochastic pass
// (or ensemble member), one column per input.
struct PredictiveSamples {
  Matrix probabilities;
  std::string method;
  std::uint64_t seed = 0;

  std::size_t num_samples() const { return static_cast<std::size_t>(probabilities.rows()); }
  std::size_t num_points() const { return static_cast<std::size_t>(probabilities.cols()); }
  // Throws ArgumentError unless T >= 1 and every entry lies in (0,1).
  void Validate() const;
};

// Per test point: predictive mean, uncertainty score (nats for entropy-based
// scores), and the true label.
struct ScoredPredictions {
  Vector mean_probability;
  Vector uncertainty;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  void Validate() const;  // lengths agree, labels binary, scores finite
};

// Columnwise mean over samples.
Vector PredictiveMean(const PredictiveSamples& samples);

// Binary entropy in nats, 0 ln 0 = 0. Throws ArgumentError outside [0,1].
double PredictiveEntropy(double p);
Vector PredictiveEntropy(const Vector& p);

// Mean + predictive entropy of the mean.
ScoredPredictions ScoreByEntropy(const PredictiveSamples& samples, std::span<const int> labels);

struct RocPoint {
  double fpr;
  double tpr;
};

struct RocCurve {
  std::vector<RocPoint> points;  // (0,0) ... (1,1), both coordinates non-decreasing
  double auc = 0.0;
};

// Higher score means "more positive". Equal scores form a single threshold
// step. Throws UndefinedAucError when only one class is present.
RocCurve RocAndAuc(std::span<const double> scores, std::span<const int> labels);
RocCurve RocAndAuc(const Vector& scores, std::span<const int> labels);

// Fraction with (p >= threshold) == label. Throws ArgumentError when empty.
double BinaryAccuracy(const Vector& probs, std::span<const int> labels, double threshold = 0.5);

std::vector<double> DefaultRetentionFractions();

// ceil(r * n), guarded against representation error (0.7 * 10 retains 7).
std::size_t RetainedCount(double fraction, std::size_t n);

// Indices sorted by ascending uncertainty, ties by original index.
std::vector<std::size_t> RetentionOrder(const Vector& uncertainty);

struct ReferralPoint {
  double fraction;
  std::size_t retained;
  double accuracy;
  std::optional<double> auc;  // missing when the retained set is single-class
};

struct ReferralCurve {
  std::vector<ReferralPoint> points;
};

// Keeps the RetainedCount lowest-uncertainty points for each fraction and
// scores accuracy and AUC (on the predictive mean) over that subset only.
// Fractions must be strictly increasing within (0,1].
ReferralCurve ReferralSweep(const ScoredPredictions& predictions, std::span<const double> fractions);

// Ceiling curve: refers wrong predictions first.
ReferralCurve OracleReferralCurve(const ScoredPredictions& predictions,
                                  std::span<const double> fractions);
// Accuracy-only variant over a correctness vector; AUC is always missing.
ReferralCurve OracleReferralCurve(std::span<const bool> correct, std::span<const double> fractions);

// Screening reference point: 85% sensitivity at 80% specificity.
inline constexpr double kReferenceSensitivity = 0.85;
inline constexpr double kReferenceSpecificity = 0.80;

struct OperatingPoint {
  double sensitivity;
  double specificity;
  bool meets_target;  // specificity >= required specificity
};

// Smallest-FPR point with TPR >= min_sensitivity (highest TPR on ties);
// nullopt when no point qualifies.
std::optional<OperatingPoint> FindOperatingPoint(const RocCurve& roc,
                                                 double min_sensitivity = kReferenceSensitivity,
                                                 double min_specificity = kReferenceSpecificity);

struct MeanStderr {
  double mean = 0.0;
  double standard_error = 0.0;  // sample std / sqrt(n); 0 for n == 1
};

MeanStderr Summarize(std::span<const double> values);

struct AggregatedPoint {
  double fraction;
  MeanStderr accuracy;
  std::optional<MeanStderr> auc;  // over seeds where AUC was defined
  std::vector<double> accuracy_per_seed;
  std::vector<std::optional<double>> auc_per_seed;
};

struct AggregatedCurve {
  std::vector<AggregatedPoint> points;
};

// Throws ArgumentError on an empty input or mismatched fraction grids.
AggregatedCurve AggregateSeeds(std::span<const ReferralCurve> curves);

}  // namespace bdlbench

#endif  // BDLBENCH_METRICS_HPP_
