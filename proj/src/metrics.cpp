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
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "bdlbench/errors.hpp"

namespace bdlbench {

void PredictiveSamples::Validate() const {
  if (probabilities.rows() < 1) throw ArgumentError("predictive samples need T >= 1");
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    const double p = probabilities.data()[i];
    if (!(p > 0.0 && p < 1.0)) {
      throw ArgumentError(fmt::format("sampled probability {} lies outside (0,1)", p));
    }
  }
}

void ScoredPredictions::Validate() const {
  if (static_cast<std::size_t>(mean_probability.size()) != labels.size() ||
      static_cast<std::size_t>(uncertainty.size()) != labels.size()) {
    throw ShapeError(fmt::format("scored predictions: {} means, {} scores, {} labels",
                                 mean_probability.size(), uncertainty.size(), labels.size()));
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw ArgumentError(fmt::format("label {} is not binary", y));
  }
  if (!uncertainty.allFinite() || !mean_probability.allFinite()) {
    throw ArgumentError("scored predictions contain non-finite values");
  }
}

Vector PredictiveMean(const PredictiveSamples& samples) {
  if (samples.probabilities.rows() < 1 || samples.probabilities.cols() < 1) {
    throw ArgumentError("predictive mean of empty samples");
  }
  return samples.probabilities.colwise().mean().transpose();
}

double PredictiveEntropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ArgumentError(fmt::format("probability {} lies outside [0,1]", p));
  }
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log1p(-p);
  return h;
}

Vector PredictiveEntropy(const Vector& p) {
  Vector h(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) h[i] = PredictiveEntropy(p[i]);
  return h;
}

ScoredPredictions ScoreByEntropy(const PredictiveSamples& samples, std::span<const int> labels) {
  if (samples.num_points() != labels.size()) {
    throw ShapeError(fmt::format("{} sampled points for {} labels", samples.num_points(),
                                 labels.size()));
  }
  ScoredPredictions out;
  out.mean_probability = PredictiveMean(samples);
  out.uncertainty = PredictiveEntropy(out.mean_probability);
  out.labels.assign(labels.begin(), labels.end());
  return out;
}

RocCurve RocAndAuc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw ShapeError(fmt::format("{} scores for {} labels", scores.size(), labels.size()));
  }
  double positives = 0.0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw ArgumentError(fmt::format("label {} is not binary", y));
    positives += y;
  }
  const double negatives = static_cast<double>(labels.size()) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    throw UndefinedAucError("AUC is undefined when only one class is present");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&scores](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve roc;
  roc.points.push_back({0.0, 0.0});
  // Integer counts keep the area exactly equal to the pairwise statistic.
  double tp = 0.0;
  double fp = 0.0;
  double twice_area = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    const double tp_prev = tp;
    const double fp_prev = fp;
    while (i < order.size() && scores[order[i]] == threshold) {
      if (labels[order[i]] == 1) {
        tp += 1.0;
      } else {
        fp += 1.0;
      }
      ++i;
    }
    twice_area += (fp - fp_prev) * (tp + tp_prev);
    roc.points.push_back({fp / negatives, tp / positives});
  }
  roc.auc = twice_area / (2.0 * positives * negatives);
  return roc;
}

RocCurve RocAndAuc(const Vector& scores, std::span<const int> labels) {
  return RocAndAuc(std::span<const double>(scores.data(), static_cast<std::size_t>(scores.size())),
                   labels);
}

double BinaryAccuracy(const Vector& probs, std::span<const int> labels, double threshold) {
  if (labels.empty()) throw ArgumentError("accuracy of an empty set");
  if (static_cast<std::size_t>(probs.size()) != labels.size()) {
    throw ShapeError(fmt::format("{} probabilities for {} labels", probs.size(), labels.size()));
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int predicted = probs[static_cast<Eigen::Index>(i)] >= threshold ? 1 : 0;
    if (predicted == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

std::vector<double> DefaultRetentionFractions() { return {0.5, 0.6, 0.7, 0.8, 0.9, 1.0}; }

std::size_t RetainedCount(double fraction, std::size_t n) {
  const double exact = fraction * static_cast<double>(n);
  const auto count = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  return std::clamp<std::size_t>(count, n == 0 ? 0 : 1, n);
}

std::vector<std::size_t> RetentionOrder(const Vector& uncertainty) {
  std::vector<std::size_t> order(static_cast<std::size_t>(uncertainty.size()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&uncertainty](std::size_t a, std::size_t b) {
    return uncertainty[static_cast<Eigen::Index>(a)] < uncertainty[static_cast<Eigen::Index>(b)];
  });
  return order;
}

namespace {

void CheckFractions(std::span<const double> fractions) {
  if (fractions.empty()) throw ArgumentError("empty retention-fraction grid");
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (!(fractions[i] > 0.0 && fractions[i] <= 1.0)) {
      throw ArgumentError(fmt::format("retention fraction {} lies outside (0,1]", fractions[i]));
    }
    if (i > 0 && !(fractions[i] > fractions[i - 1])) {
      throw ArgumentError("retention fractions must be strictly increasing");
    }
  }
}

}  // namespace

ReferralCurve ReferralSweep(const ScoredPredictions& predictions,
                            std::span<const double> fractions) {
  predictions.Validate();
  CheckFractions(fractions);
  const std::size_t n = predictions.size();
  if (n == 0) throw ArgumentError("referral sweep over an empty prediction set");

  const auto order = RetentionOrder(predictions.uncertainty);
  ReferralCurve curve;
  for (double r : fractions) {
    const std::size_t keep = RetainedCount(r, n);
    std::vector<std::size_t> kept(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
    std::sort(kept.begin(), kept.end());
    Vector means(static_cast<Eigen::Index>(keep));
    std::vector<int> labels(keep);
    for (std::size_t i = 0; i < keep; ++i) {
      means[static_cast<Eigen::Index>(i)] = predictions.mean_probability[static_cast<Eigen::Index>(kept[i])];
      labels[i] = predictions.labels[kept[i]];
    }
    ReferralPoint point{r, keep, BinaryAccuracy(means, labels), std::nullopt};
    try {
      point.auc = RocAndAuc(means, labels).auc;
    } catch (const UndefinedAucError&) {
    }
    curve.points.push_back(point);
  }
  return curve;
}

ReferralCurve OracleReferralCurve(const ScoredPredictions& predictions,
                                  std::span<const double> fractions) {
  predictions.Validate();
  ScoredPredictions oracle = predictions;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    const int predicted = predictions.mean_probability[idx] >= 0.5 ? 1 : 0;
    oracle.uncertainty[idx] = predicted == predictions.labels[i] ? 0.0 : 1.0;
  }
  return ReferralSweep(oracle, fractions);
}

ReferralCurve OracleReferralCurve(std::span<const bool> correct,
                                  std::span<const double> fractions) {
  ScoredPredictions encoded;
  encoded.mean_probability.resize(static_cast<Eigen::Index>(correct.size()));
  encoded.uncertainty.resize(static_cast<Eigen::Index>(correct.size()));
  encoded.labels.assign(correct.size(), 1);
  for (std::size_t i = 0; i < correct.size(); ++i) {
    encoded.mean_probability[static_cast<Eigen::Index>(i)] = correct[i] ? 1.0 : 0.0;
    encoded.uncertainty[static_cast<Eigen::Index>(i)] = correct[i] ? 0.0 : 1.0;
  }
  return ReferralSweep(encoded, fractions);
}

std::optional<OperatingPoint> FindOperatingPoint(const RocCurve& roc, double min_sensitivity,
                                                 double min_specificity) {
  const RocPoint* best = nullptr;
  for (const auto& p : roc.points) {
    if (p.tpr < min_sensitivity) continue;
    if (best == nullptr || p.fpr < best->fpr || (p.fpr == best->fpr && p.tpr > best->tpr)) {
      best = &p;
    }
  }
  if (best == nullptr) return std::nullopt;
  const double specificity = 1.0 - best->fpr;
  return OperatingPoint{best->tpr, specificity, specificity >= min_specificity};
}

MeanStderr Summarize(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("cannot summarize an empty sample");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return {mean, sd / std::sqrt(n)};
}

AggregatedCurve AggregateSeeds(std::span<const ReferralCurve> curves) {
  if (curves.empty()) throw ArgumentError("no curves to aggregate");
  const auto& grid = curves.front().points;
  for (const auto& c : curves) {
    if (c.points.size() != grid.size()) throw ArgumentError("referral curves use different grids");
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (c.points[k].fraction != grid[k].fraction) {
        throw ArgumentError(fmt::format("fraction grids disagree at position {}", k));
      }
    }
  }
  AggregatedCurve out;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    AggregatedPoint point{grid[k].fraction, {}, std::nullopt, {}, {}};
    std::vector<double> aucs;
    for (const auto& c : curves) {
      point.accuracy_per_seed.push_back(c.points[k].accuracy);
      point.auc_per_seed.push_back(c.points[k].auc);
      if (c.points[k].auc) aucs.push_back(*c.points[k].auc);
    }
    point.accuracy = Summarize(point.accuracy_per_seed);
    if (!aucs.empty()) point.auc = Summarize(aucs);
    out.points.push_back(std::move(point));
  }
  return out;
}

}  // namespace bdlbench
