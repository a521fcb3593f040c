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

#ifndef BDLBENCH_DATA_HPP_
#define BDLBENCH_DATA_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bdlbench/network.hpp"
#include "bdlbench/random.hpp"

namespace bdlbench {

enum class SplitTag { kTrain, kVal, kTest, kShiftedTest };
// Where a generated point came from: ordinary support, the label-noise
// overlap band (aleatoric), or the unsupported cluster (epistemic).
enum class Region { kClean, kNoise, kOod };

std::string_view ToString(SplitTag tag);
std::string_view ToString(Region region);
SplitTag ParseSplitTag(std::string_view text);  // throws ParseError
Region ParseRegion(std::string_view text);      // throws ParseError

struct Dataset {
  Matrix features;          // N x D
  std::vector<int> labels;  // N, each 0 or 1
  SplitTag split = SplitTag::kTrain;
  std::vector<Region> regions;  // N
  std::uint64_t seed = 0;       // generator seed; 0 for loaded data

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }
  double positive_fraction() const;
  bool has_both_classes() const;

  // Rows in the given order; keeps split and seed.
  Dataset Subset(std::span<const std::size_t> indices) const;
  // Throws ArgumentError on non-finite features, non-binary labels, or
  // length mismatches.
  void Validate() const;

  friend bool operator==(const Dataset& a, const Dataset& b);
};

// Frozen parameters of the synthetic two-population task. Any change to a
// default must come with a bump of kVersion.
struct GeneratorSpec {
  static constexpr int kVersion = 1;

  int version = kVersion;
  std::size_t dim = 2;
  std::size_t n_train = 2000;  // pool that is split into train/val
  double val_fraction = 0.2;
  std::size_t n_test = 2000;
  std::size_t n_shifted = 2000;
  double positive_fraction = 0.196;
  double class_separation = 1.5;  // class means at +-separation on axis 0
  double component_offset = 1.5;  // mixture components at +-offset on axis 1
  double cluster_std = 1.0;
  double noise_half_width = 0.75;  // |x0| < w is the label-noise band
  double flip_rate = 0.15;
  double shift_offset = 0.75;  // shifted population: mean moves along axis 1
  double shift_scale = 1.3;    // and spreads by this factor around each component
  double ood_fraction = 0.1;   // share of shifted_test drawn from the unsupported cluster
  double ood_distance = 7.0;   // cluster centre at (0, distance, 0, ...)
  double ood_std = 0.5;
  double ood_exclusion_radius = 2.5;  // no in-support point lies this close to the centre

  void Validate() const;  // throws ArgumentError
  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

nlohmann::json ToJson(const GeneratorSpec& spec);
GeneratorSpec GeneratorSpecFromJson(const nlohmann::json& j);  // version-checked

struct SyntheticSplits {
  Dataset train;
  Dataset val;
  Dataset test;
  Dataset shifted_test;
};

SyntheticSplits GenerateSynthetic(const GeneratorSpec& spec, std::uint64_t seed);

// Stratified, order-preserving partition. Throws StratificationError if
// either side would lose a class.
std::pair<Dataset, Dataset> SplitTrainVal(const Dataset& dataset, double val_fraction,
                                          std::uint64_t seed);

struct NormalizationStats {
  Vector mean;
  Vector stddev;
  std::vector<bool> constant_feature;  // std clamped to 1
  bool fitted = false;

  bool any_constant() const;
};

NormalizationStats FitNormalization(const Dataset& train);
// Throws StateError for unfitted stats, ShapeError on dimension mismatch.
Dataset ApplyNormalization(const NormalizationStats& stats, const Dataset& dataset);

struct CsvSchema {
  std::string label_column = "label";
  std::string split_column = "split";    // optional in the file
  std::string region_column = "region";  // optional in the file
  // Empty: every column other than label/split/region, in file order.
  std::vector<std::string> feature_columns;
  // Keep only rows of this split (requires the split column).
  std::optional<SplitTag> only_split;
  // Used unless every kept row carries the same split value.
  SplitTag default_split = SplitTag::kTrain;
};

// Errors are ParseError naming the 1-based data row (header excluded).
Dataset LoadCsv(const std::string& path, const CsvSchema& schema = {});
Dataset ParseCsv(std::string_view text, const CsvSchema& schema = {});
// Columns x0..x{D-1}, label, split, region; shortest round-trip doubles.
std::string ToCsv(const Dataset& dataset);
void SaveCsv(const Dataset& dataset, const std::string& path);

struct Minibatch {
  Matrix features;
  std::vector<int> labels;
  ClassFrequencies frequencies;
};

// Reshuffles at every epoch from its own seeded stream; the last batch may be
// partial.
class MinibatchIterator {
 public:
  MinibatchIterator(const Dataset& dataset, std::size_t batch_size, std::uint64_t seed);
  // The iterator keeps a pointer to the dataset.
  MinibatchIterator(Dataset&&, std::size_t, std::uint64_t) = delete;

  std::vector<Minibatch> NextEpoch();
  std::size_t batches_per_epoch() const;

 private:
  const Dataset* dataset_;
  std::size_t batch_size_;
  Rng rng_;
  std::vector<std::size_t> order_;
};

}  // namespace bdlbench

#endif  // BDLBENCH_DATA_HPP_
