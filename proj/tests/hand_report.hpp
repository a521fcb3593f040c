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

#ifndef BDLBENCH_TESTS_HAND_REPORT_HPP_
#define BDLBENCH_TESTS_HAND_REPORT_HPP_

#include <optional>
#include <tuple>
#include <vector>

#include "bdlbench/bench.hpp"

namespace bdlbench::testing {

inline ReferralCurve Curve(std::vector<std::tuple<double, double, std::optional<double>>> points) {
  ReferralCurve c;
  for (const auto& [r, acc, auc] : points) c.points.push_back({r, 0, acc, auc});
  return c;
}

inline SplitReport Split(const std::vector<ReferralCurve>& seeds) {
  SplitReport s;
  s.ok = true;
  s.curve = AggregateSeeds(seeds);
  s.oracle = AggregateSeeds(seeds);
  RocSnapshot snap{1.0, {}, std::nullopt};
  snap.roc.points = {{0.0, 0.0}, {0.1, 0.6}, {0.2, 0.9}, {1.0, 1.0}};
  snap.roc.auc = 0.875;
  snap.operating_point = FindOperatingPoint(snap.roc);
  s.rocs = {snap};
  for (std::size_t i = 0; i < seeds.size(); ++i) s.operating_points.push_back({snap.operating_point});
  s.mean_entropy_by_region["clean"] = std::vector<double>(seeds.size(), 0.25);
  return s;
}

// A hand-built report with round numbers; the expected table is written out
// in tests/golden/table_report.md.
inline BenchmarkReport HandReport() {
  BenchmarkReport r;
  r.config.fractions = {0.5, 0.7, 1.0};
  r.config.n_seeds = 3;
  r.config.methods = {MethodTag::kMcDropout, MethodTag::kMfvi, MethodTag::kRandom};

  const std::vector<ReferralCurve> dropout = {
      Curve({{0.5, 0.95, 0.99}, {0.7, 0.92, 0.97}, {1.0, 0.88, 0.95}}),
      Curve({{0.5, 0.96, 0.98}, {0.7, 0.93, 0.96}, {1.0, 0.89, 0.94}}),
      Curve({{0.5, 0.97, 0.97}, {0.7, 0.91, 0.95}, {1.0, 0.84, 0.93}}),
  };
  MethodReport m{MethodTag::kMcDropout, 1153, {0, 1, 2}, {}, Split(dropout), Split(dropout)};
  r.methods.push_back(m);

  MethodReport failed{MethodTag::kMfvi, 0, {}, {}, {}, {}};
  for (std::size_t i = 0; i < 3; ++i) failed.failures.push_back({i, 1000 + i, "diverged"});
  failed.test.error = failed.shifted_test.error = "diverged";
  r.methods.push_back(failed);

  const std::vector<ReferralCurve> random = {
      Curve({{0.5, 0.85, std::nullopt}, {0.7, 0.86, 0.90}, {1.0, 0.87, 0.91}})};
  r.methods.push_back({MethodTag::kRandom, 1153, {5000}, {}, Split(random), Split(random)});
  return r;
}

}  // namespace bdlbench::testing

#endif  // BDLBENCH_TESTS_HAND_REPORT_HPP_
