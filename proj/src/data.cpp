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

#include "bdlbench/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "bdlbench/errors.hpp"

namespace bdlbench {

std::string_view ToString(SplitTag tag) {
  switch (tag) {
    case SplitTag::kTrain: return "train";
    case SplitTag::kVal: return "val";
    case SplitTag::kTest: return "test";
    case SplitTag::kShiftedTest: return "shifted_test";
  }
  return "?";
}

std::string_view ToString(Region region) {
  switch (region) {
    case Region::kClean: return "clean";
    case Region::kNoise: return "noise_region";
    case Region::kOod: return "ood_region";
  }
  return "?";
}

SplitTag ParseSplitTag(std::string_view text) {
  for (auto tag : {SplitTag::kTrain, SplitTag::kVal, SplitTag::kTest, SplitTag::kShiftedTest}) {
    if (text == ToString(tag)) return tag;
  }
  throw ParseError(fmt::format("unknown split '{}'", text));
}

Region ParseRegion(std::string_view text) {
  for (auto region : {Region::kClean, Region::kNoise, Region::kOod}) {
    if (text == ToString(region)) return region;
  }
  throw ParseError(fmt::format("unknown region '{}'", text));
}

double Dataset::positive_fraction() const {
  if (labels.empty()) return 0.0;
  const auto pos = std::count(labels.begin(), labels.end(), 1);
  return static_cast<double>(pos) / static_cast<double>(labels.size());
}

bool Dataset::has_both_classes() const {
  const auto pos = std::count(labels.begin(), labels.end(), 1);
  return pos > 0 && static_cast<std::size_t>(pos) < labels.size();
}

Dataset Dataset::Subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.split = split;
  out.seed = seed;
  out.features.resize(static_cast<Eigen::Index>(indices.size()), features.cols());
  out.labels.reserve(indices.size());
  out.regions.reserve(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = static_cast<Eigen::Index>(indices[i]);
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(src);
    out.labels.push_back(labels[indices[i]]);
    out.regions.push_back(regions[indices[i]]);
  }
  return out;
}

void Dataset::Validate() const {
  if (static_cast<std::size_t>(features.rows()) != labels.size() ||
      regions.size() != labels.size()) {
    throw ArgumentError(fmt::format("dataset has {} rows, {} labels, {} region tags",
                                    features.rows(), labels.size(), regions.size()));
  }
  if (!features.allFinite()) throw ArgumentError("dataset contains non-finite features");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw ArgumentError(fmt::format("row {} has non-binary label {}", i, labels[i]));
    }
  }
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.split == b.split && a.seed == b.seed && a.labels == b.labels &&
         a.regions == b.regions && a.features.rows() == b.features.rows() &&
         a.features.cols() == b.features.cols() && a.features == b.features;
}

// ---------------------------------------------------------------------------
// Synthetic generator

void GeneratorSpec::Validate() const {
  if (version != kVersion) {
    throw IncompatibleVersionError(
        fmt::format("generator version {} is not supported (expected {})", version, kVersion));
  }
  auto require = [](bool ok, std::string_view what) {
    if (!ok) throw ArgumentError(fmt::format("invalid generator spec: {}", what));
  };
  require(dim >= 2, "dim must be >= 2");
  require(n_train >= 4 && n_test >= 2 && n_shifted >= 2, "split sizes too small");
  require(val_fraction > 0.0 && val_fraction < 1.0, "val_fraction must lie in (0,1)");
  require(positive_fraction > 0.0 && positive_fraction < 1.0, "positive_fraction must lie in (0,1)");
  require(flip_rate >= 0.0 && flip_rate <= 0.5, "flip_rate must lie in [0,0.5]");
  require(cluster_std > 0.0 && ood_std > 0.0, "standard deviations must be positive");
  require(noise_half_width >= 0.0, "noise_half_width must be >= 0");
  require(shift_scale > 0.0, "shift_scale must be positive");
  require(ood_fraction >= 0.0 && ood_fraction < 1.0, "ood_fraction must lie in [0,1)");
  require(ood_exclusion_radius >= 0.0, "ood_exclusion_radius must be >= 0");
  require(std::isfinite(class_separation) && std::isfinite(component_offset) &&
              std::isfinite(shift_offset) && std::isfinite(ood_distance),
          "non-finite geometry");
}

nlohmann::json ToJson(const GeneratorSpec& s) {
  return {{"version", s.version},
          {"dim", s.dim},
          {"n_train", s.n_train},
          {"val_fraction", s.val_fraction},
          {"n_test", s.n_test},
          {"n_shifted", s.n_shifted},
          {"positive_fraction", s.positive_fraction},
          {"class_separation", s.class_separation},
          {"component_offset", s.component_offset},
          {"cluster_std", s.cluster_std},
          {"noise_half_width", s.noise_half_width},
          {"flip_rate", s.flip_rate},
          {"shift_offset", s.shift_offset},
          {"shift_scale", s.shift_scale},
          {"ood_fraction", s.ood_fraction},
          {"ood_distance", s.ood_distance},
          {"ood_std", s.ood_std},
          {"ood_exclusion_radius", s.ood_exclusion_radius}};
}

GeneratorSpec GeneratorSpecFromJson(const nlohmann::json& j) {
  GeneratorSpec s;
  try {
    if (!j.contains("version")) throw ParseError("generator spec lacks a version field");
    s.version = j.at("version").get<int>();
    if (s.version != GeneratorSpec::kVersion) {
      throw IncompatibleVersionError(fmt::format("generator version {} is not supported",
                                                 s.version));
    }
    auto read = [&j](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    read("dim", s.dim);
    read("n_train", s.n_train);
    read("val_fraction", s.val_fraction);
    read("n_test", s.n_test);
    read("n_shifted", s.n_shifted);
    read("positive_fraction", s.positive_fraction);
    read("class_separation", s.class_separation);
    read("component_offset", s.component_offset);
    read("cluster_std", s.cluster_std);
    read("noise_half_width", s.noise_half_width);
    read("flip_rate", s.flip_rate);
    read("shift_offset", s.shift_offset);
    read("shift_scale", s.shift_scale);
    read("ood_fraction", s.ood_fraction);
    read("ood_distance", s.ood_distance);
    read("ood_std", s.ood_std);
    read("ood_exclusion_radius", s.ood_exclusion_radius);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("generator spec: {}", e.what()));
  }
  s.Validate();
  return s;
}

namespace {

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

class PopulationSampler {
 public:
  PopulationSampler(const GeneratorSpec& spec, bool shifted)
      : spec_(spec), shifted_(shifted) {
    // Flips move mass between classes; solve for the latent prior that makes
    // the observed positive fraction hit the target in the unshifted population.
    const double mu = spec.class_separation;
    const double s = spec.cluster_std;
    const double w = spec.noise_half_width;
    const double band = NormalCdf((w - mu) / s) - NormalCdf((-w - mu) / s);
    const double fq = spec.flip_rate * band;
    latent_positive_ = (spec.positive_fraction - fq) / (1.0 - 2.0 * fq);
    if (!(latent_positive_ > 0.0 && latent_positive_ < 1.0)) {
      throw ArgumentError("flip_rate too large for the requested positive_fraction");
    }
  }

  // One in-support point: features into `row`, returns (label, region).
  std::pair<int, Region> Draw(Rng& rng, Eigen::RowVectorXd& row) const {
    const std::size_t d = spec_.dim;
    for (;;) {
      const int latent = Bernoulli(rng, latent_positive_) ? 1 : 0;
      const double component = Bernoulli(rng, 0.5) ? 1.0 : -1.0;
      const double scale = shifted_ ? spec_.shift_scale : 1.0;
      row(0) = (latent == 1 ? 1.0 : -1.0) * spec_.class_separation +
               scale * spec_.cluster_std * StandardNormal(rng);
      row(1) = component * spec_.component_offset + (shifted_ ? spec_.shift_offset : 0.0) +
               scale * spec_.cluster_std * StandardNormal(rng);
      for (std::size_t k = 2; k < d; ++k) {
        row(static_cast<Eigen::Index>(k)) = scale * spec_.cluster_std * StandardNormal(rng);
      }
      if (NearOodCentre(row)) continue;
      if (std::abs(row(0)) < spec_.noise_half_width) {
        const bool flip = Bernoulli(rng, spec_.flip_rate);
        return {flip ? 1 - latent : latent, Region::kNoise};
      }
      return {latent, Region::kClean};
    }
  }

  std::pair<int, Region> DrawOod(Rng& rng, Eigen::RowVectorXd& row) const {
    for (Eigen::Index k = 0; k < row.size(); ++k) row(k) = spec_.ood_std * StandardNormal(rng);
    row(1) += spec_.ood_distance;
    return {row(0) >= 0.0 ? 1 : 0, Region::kOod};
  }

 private:
  bool NearOodCentre(const Eigen::RowVectorXd& row) const {
    if (spec_.ood_exclusion_radius <= 0.0) return false;
    double dist2 = 0.0;
    for (Eigen::Index k = 0; k < row.size(); ++k) {
      const double centre = k == 1 ? spec_.ood_distance : 0.0;
      dist2 += (row(k) - centre) * (row(k) - centre);
    }
    return dist2 < spec_.ood_exclusion_radius * spec_.ood_exclusion_radius;
  }

  const GeneratorSpec& spec_;
  bool shifted_;
  double latent_positive_;
};

Dataset Sample(const GeneratorSpec& spec, std::uint64_t seed, std::string_view stream,
               std::size_t n, SplitTag split, bool shifted, double ood_fraction) {
  Rng rng = MakeRng(seed, stream);
  PopulationSampler sampler(spec, shifted);
  Dataset out;
  out.split = split;
  out.seed = seed;
  out.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(spec.dim));
  out.labels.resize(n);
  out.regions.resize(n);
  const auto n_ood = static_cast<std::size_t>(std::llround(ood_fraction * static_cast<double>(n)));
  Eigen::RowVectorXd row(static_cast<Eigen::Index>(spec.dim));
  for (std::size_t i = 0; i < n; ++i) {
    // OOD points are interleaved at evenly spaced positions.
    const bool ood = n_ood > 0 && (i * n_ood) / n != ((i + 1) * n_ood) / n;
    auto [label, region] = ood ? sampler.DrawOod(rng, row) : sampler.Draw(rng, row);
    out.features.row(static_cast<Eigen::Index>(i)) = row;
    out.labels[i] = label;
    out.regions[i] = region;
  }
  return out;
}

}  // namespace

SyntheticSplits GenerateSynthetic(const GeneratorSpec& spec, std::uint64_t seed) {
  spec.Validate();
  SyntheticSplits splits;
  Dataset pool = Sample(spec, seed, "generator/train", spec.n_train, SplitTag::kTrain, false, 0.0);
  auto [train, val] = SplitTrainVal(pool, spec.val_fraction, seed);
  splits.train = std::move(train);
  splits.val = std::move(val);
  splits.test = Sample(spec, seed, "generator/test", spec.n_test, SplitTag::kTest, false, 0.0);
  splits.shifted_test = Sample(spec, seed, "generator/shifted", spec.n_shifted,
                               SplitTag::kShiftedTest, true, spec.ood_fraction);
  return splits;
}

std::pair<Dataset, Dataset> SplitTrainVal(const Dataset& dataset, double val_fraction,
                                          std::uint64_t seed) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw ArgumentError(fmt::format("val_fraction must lie in (0,1), got {}", val_fraction));
  }
  const std::size_t n = dataset.size();
  const auto n_val = static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(n)));

  std::array<std::vector<std::size_t>, kNumClasses> by_class;
  for (std::size_t i = 0; i < n; ++i) by_class[static_cast<std::size_t>(dataset.labels[i])].push_back(i);

  // Largest-remainder apportionment keeps the total exactly n_val.
  std::array<std::size_t, kNumClasses> take{};
  std::array<double, kNumClasses> remainder{};
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    const double quota = static_cast<double>(n_val) * static_cast<double>(by_class[k].size()) /
                         static_cast<double>(n);
    take[k] = static_cast<std::size_t>(std::floor(quota));
    remainder[k] = quota - std::floor(quota);
    assigned += take[k];
  }
  while (assigned < n_val) {
    const std::size_t k = remainder[1] > remainder[0] ? 1 : 0;
    ++take[k];
    remainder[k] = -1.0;
    ++assigned;
  }
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    if (take[k] == 0 || take[k] >= by_class[k].size()) {
      throw StratificationError(fmt::format(
          "class {} ({} samples) cannot be represented on both sides of a {} split", k,
          by_class[k].size(), val_fraction));
    }
  }

  Rng rng = MakeRng(seed, "split/train_val");
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> val_idx;
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    auto idx = by_class[k];
    Shuffle(idx.begin(), idx.end(), rng);
    val_idx.insert(val_idx.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take[k]));
    train_idx.insert(train_idx.end(), idx.begin() + static_cast<std::ptrdiff_t>(take[k]), idx.end());
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(val_idx.begin(), val_idx.end());
  Dataset train = dataset.Subset(train_idx);
  Dataset val = dataset.Subset(val_idx);
  train.split = SplitTag::kTrain;
  val.split = SplitTag::kVal;
  return {std::move(train), std::move(val)};
}

// ---------------------------------------------------------------------------
// Normalization

bool NormalizationStats::any_constant() const {
  return std::find(constant_feature.begin(), constant_feature.end(), true) !=
         constant_feature.end();
}

NormalizationStats FitNormalization(const Dataset& train) {
  if (train.size() == 0) throw ArgumentError("cannot fit normalization on an empty dataset");
  NormalizationStats stats;
  const auto n = static_cast<double>(train.size());
  stats.mean = train.features.colwise().mean().transpose();
  stats.stddev.resize(stats.mean.size());
  stats.constant_feature.assign(static_cast<std::size_t>(stats.mean.size()), false);
  for (Eigen::Index k = 0; k < stats.mean.size(); ++k) {
    const double var = (train.features.col(k).array() - stats.mean[k]).square().sum() / n;
    const double sd = std::sqrt(var);
    if (!(sd > 1e-12 * std::max(1.0, std::abs(stats.mean[k])))) {
      stats.stddev[k] = 1.0;
      stats.constant_feature[static_cast<std::size_t>(k)] = true;
    } else {
      stats.stddev[k] = sd;
    }
  }
  stats.fitted = true;
  return stats;
}

Dataset ApplyNormalization(const NormalizationStats& stats, const Dataset& dataset) {
  if (!stats.fitted) throw StateError("normalization statistics have not been fitted");
  if (static_cast<std::size_t>(stats.mean.size()) != dataset.dim()) {
    throw ShapeError(fmt::format("normalization fitted on {} features, dataset has {}",
                                 stats.mean.size(), dataset.dim()));
  }
  Dataset out = dataset;
  for (Eigen::Index k = 0; k < stats.mean.size(); ++k) {
    out.features.col(k) = (out.features.col(k).array() - stats.mean[k]) / stats.stddev[k];
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    std::string_view field = line.substr(start, comma == std::string_view::npos ? comma : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
      field.remove_suffix(1);
    }
    fields.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<double> ParseDouble(std::string_view text) {
  double value = 0.0;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

Dataset ParseCsv(std::string_view text, const CsvSchema& schema) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start <= text.size()) {
      const std::size_t nl = text.find('\n', start);
      std::string_view line = text.substr(start, nl == std::string_view::npos ? nl : nl - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines.push_back(line);
      if (nl == std::string_view::npos) break;
      start = nl + 1;
    }
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw ParseError("CSV input has no header row");

  const auto header = SplitFields(lines.front());
  auto find_column = [&header](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  };
  const auto label_col = find_column(schema.label_column);
  if (!label_col) throw ParseError(fmt::format("header lacks label column '{}'", schema.label_column));
  const auto split_col = find_column(schema.split_column);
  const auto region_col = find_column(schema.region_column);
  if (schema.only_split && !split_col) {
    throw ParseError(fmt::format("split filter requested but header lacks '{}'", schema.split_column));
  }

  std::vector<std::size_t> feature_cols;
  if (schema.feature_columns.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i != *label_col && (!split_col || i != *split_col) && (!region_col || i != *region_col)) {
        feature_cols.push_back(i);
      }
    }
  } else {
    for (const auto& name : schema.feature_columns) {
      const auto col = find_column(name);
      if (!col) throw ParseError(fmt::format("header lacks feature column '{}'", name));
      feature_cols.push_back(*col);
    }
  }
  if (feature_cols.empty()) throw ParseError("CSV has no feature columns");

  std::vector<double> values;
  Dataset out;
  out.split = schema.only_split.value_or(schema.default_split);
  std::optional<SplitTag> file_split;
  bool mixed_splits = false;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::size_t row = r;  // 1-based data row
    if (lines[r].empty()) continue;
    const auto fields = SplitFields(lines[r]);
    if (fields.size() != header.size()) {
      throw ParseError(fmt::format("row {}: expected {} fields, found {}", row, header.size(),
                                   fields.size()));
    }
    if (split_col) {
      SplitTag tag;
      try {
        tag = ParseSplitTag(fields[*split_col]);
      } catch (const ParseError& e) {
        throw ParseError(fmt::format("row {}: {}", row, e.what()));
      }
      if (schema.only_split && tag != *schema.only_split) continue;
      if (file_split && *file_split != tag) mixed_splits = true;
      file_split = tag;
    }
    const std::string_view label_text = fields[*label_col];
    if (label_text.empty()) throw ParseError(fmt::format("row {}: missing label", row));
    if (label_text != "0" && label_text != "1") {
      throw ParseError(fmt::format("row {}: label '{}' is not 0 or 1", row, label_text));
    }
    for (std::size_t c : feature_cols) {
      const auto v = ParseDouble(fields[c]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError(fmt::format("row {}: column '{}' has non-numeric value '{}'", row,
                                     header[c], fields[c]));
      }
      values.push_back(*v);
    }
    out.labels.push_back(label_text == "1" ? 1 : 0);
    Region region = Region::kClean;
    if (region_col) {
      try {
        region = ParseRegion(fields[*region_col]);
      } catch (const ParseError& e) {
        throw ParseError(fmt::format("row {}: {}", row, e.what()));
      }
    }
    out.regions.push_back(region);
  }
  if (file_split && !mixed_splits) out.split = *file_split;
  const auto rows = static_cast<Eigen::Index>(out.labels.size());
  const auto cols = static_cast<Eigen::Index>(feature_cols.size());
  out.features = Eigen::Map<const Matrix>(values.data(), rows, cols);
  return out;
}

Dataset LoadCsv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseCsv(buffer.str(), schema);
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path, e.what()));
  }
}

std::string ToCsv(const Dataset& dataset) {
  std::string out;
  for (std::size_t k = 0; k < dataset.dim(); ++k) out += fmt::format("x{},", k);
  out += "label,split,region\n";
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (std::size_t k = 0; k < dataset.dim(); ++k) {
      out += fmt::format("{},", dataset.features(static_cast<Eigen::Index>(i),
                                                 static_cast<Eigen::Index>(k)));
    }
    out += fmt::format("{},{},{}\n", dataset.labels[i], ToString(dataset.split),
                       ToString(dataset.regions[i]));
  }
  return out;
}

void SaveCsv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path));
  out << ToCsv(dataset);
  if (!out) throw IoError(fmt::format("write to '{}' failed", path));
}

// ---------------------------------------------------------------------------
// Mini-batches

MinibatchIterator::MinibatchIterator(const Dataset& dataset, std::size_t batch_size,
                                     std::uint64_t seed)
    : dataset_(&dataset), batch_size_(batch_size), rng_(MakeRng(seed, "data/order")) {
  if (batch_size_ < 2) throw ArgumentError("batch size must be at least 2");
  order_.resize(dataset.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
}

std::size_t MinibatchIterator::batches_per_epoch() const {
  return (dataset_->size() + batch_size_ - 1) / batch_size_;
}

std::vector<Minibatch> MinibatchIterator::NextEpoch() {
  Shuffle(order_.begin(), order_.end(), rng_);
  std::vector<Minibatch> batches;
  batches.reserve(batches_per_epoch());
  for (std::size_t start = 0; start < order_.size(); start += batch_size_) {
    const std::size_t end = std::min(order_.size(), start + batch_size_);
    Minibatch batch;
    batch.features.resize(static_cast<Eigen::Index>(end - start), dataset_->features.cols());
    for (std::size_t i = start; i < end; ++i) {
      batch.features.row(static_cast<Eigen::Index>(i - start)) =
          dataset_->features.row(static_cast<Eigen::Index>(order_[i]));
      batch.labels.push_back(dataset_->labels[order_[i]]);
    }
    batch.frequencies = ClassFrequencies::FromLabels(batch.labels);
    batches.push_back(std::move(batch));
  }
  return batches;
}

}  // namespace bdlbench
