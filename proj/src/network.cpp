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

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "bdlbench/errors.hpp"

namespace bdlbench {

NetworkSpec::NetworkSpec(std::vector<std::size_t> layer_sizes, double leaky_slope,
                         double dropout_rate, double l2_coefficient)
    : layer_sizes_(std::move(layer_sizes)),
      leaky_slope_(leaky_slope),
      dropout_rate_(dropout_rate),
      l2_coefficient_(l2_coefficient) {
  if (layer_sizes_.size() < 2) {
    throw ArgumentError("NetworkSpec needs an input size and an output size");
  }
  for (std::size_t i = 0; i < layer_sizes_.size(); ++i) {
    if (layer_sizes_[i] == 0) throw ArgumentError(fmt::format("layer_sizes[{}] is zero", i));
  }
  if (layer_sizes_.back() != 1) {
    throw ArgumentError(fmt::format("output width must be 1, got {}", layer_sizes_.back()));
  }
  if (!(leaky_slope_ > 0.0 && leaky_slope_ < 1.0)) {
    throw ArgumentError(fmt::format("leaky slope must lie in (0,1), got {}", leaky_slope_));
  }
  if (!(dropout_rate_ >= 0.0 && dropout_rate_ < 1.0)) {
    throw ArgumentError(fmt::format("dropout rate must lie in [0,1), got {}", dropout_rate_));
  }
  if (!(l2_coefficient_ >= 0.0) || !std::isfinite(l2_coefficient_)) {
    throw ArgumentError(fmt::format("l2 coefficient must be >= 0, got {}", l2_coefficient_));
  }
}

std::size_t NetworkSpec::weight_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < num_layers(); ++l) n += fan_in(l) * fan_out(l);
  return n;
}

std::size_t NetworkSpec::parameter_count() const {
  std::size_t n = weight_count();
  for (std::size_t l = 0; l < num_layers(); ++l) n += fan_out(l);
  return n;
}

NetworkSpec NetworkSpec::WithDropout(double rate) const {
  return NetworkSpec(layer_sizes_, leaky_slope_, rate, l2_coefficient_);
}

void CheckShapes(const NetworkSpec& spec, const std::vector<DenseParams>& layers) {
  if (layers.size() != spec.num_layers()) {
    throw ShapeError(fmt::format("expected {} layers, got {}", spec.num_layers(), layers.size()));
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& w = layers[l].weights;
    if (static_cast<std::size_t>(w.rows()) != spec.fan_out(l) ||
        static_cast<std::size_t>(w.cols()) != spec.fan_in(l) ||
        static_cast<std::size_t>(layers[l].bias.size()) != spec.fan_out(l)) {
      throw ShapeError(fmt::format("layer {}: expected weights {}x{} and bias {}, got {}x{} and {}",
                                   l, spec.fan_out(l), spec.fan_in(l), spec.fan_out(l), w.rows(),
                                   w.cols(), layers[l].bias.size()));
    }
  }
}

double GlorotBound(std::size_t fan_in, std::size_t fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

ParameterSet GlorotUniformInit(const NetworkSpec& spec, Rng& rng) {
  auto params = ParameterSet::Zeros(spec);
  for (std::size_t l = 0; l < spec.num_layers(); ++l) {
    const double bound = GlorotBound(spec.fan_in(l), spec.fan_out(l));
    auto& w = params.layers[l].weights;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      w.data()[i] = bound * (2.0 * UniformUnit(rng) - 1.0);
    }
  }
  return params;
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double LeakyRelu(double x, double slope) { return x >= 0.0 ? x : slope * x; }

DropoutMasks DrawDropoutMasks(const NetworkSpec& spec, std::size_t batch_rows, Rng& rng) {
  DropoutMasks masks;
  const double p = spec.dropout_rate();
  const double keep_scale = 1.0 / (1.0 - p);
  for (std::size_t l = 0; l + 1 < spec.num_layers(); ++l) {
    Matrix mask(batch_rows, spec.fan_out(l));
    for (Eigen::Index i = 0; i < mask.size(); ++i) {
      mask.data()[i] = UniformUnit(rng) < p ? 0.0 : keep_scale;
    }
    masks.push_back(std::move(mask));
  }
  return masks;
}

namespace {

void CheckBatch(const NetworkSpec& spec, const Matrix& batch) {
  if (static_cast<std::size_t>(batch.cols()) != spec.input_dim()) {
    throw ShapeError(fmt::format("layer 0: batch width {} does not match input size {}",
                                 batch.cols(), spec.input_dim()));
  }
}

void CheckMasks(const NetworkSpec& spec, Eigen::Index rows, const DropoutMasks& masks) {
  if (masks.empty()) return;
  if (masks.size() + 1 != spec.num_layers()) {
    throw ShapeError(fmt::format("expected {} dropout masks, got {}", spec.num_layers() - 1,
                                 masks.size()));
  }
  for (std::size_t l = 0; l < masks.size(); ++l) {
    if (masks[l].rows() != rows || static_cast<std::size_t>(masks[l].cols()) != spec.fan_out(l)) {
      throw ShapeError(fmt::format("layer {}: dropout mask is {}x{}, expected {}x{}", l,
                                   masks[l].rows(), masks[l].cols(), rows, spec.fan_out(l)));
    }
  }
}

}  // namespace

ForwardPass ForwardWithMasks(const NetworkSpec& spec, const ParameterSet& params,
                             const Matrix& batch, DropoutMasks masks) {
  CheckShapes(spec, params.layers);
  CheckBatch(spec, batch);
  CheckMasks(spec, batch.rows(), masks);

  ForwardPass pass;
  pass.masks = std::move(masks);
  pass.layer_inputs.push_back(batch);
  const double slope = spec.leaky_slope();
  for (std::size_t l = 0; l < spec.num_layers(); ++l) {
    const auto& layer = params.layers[l];
    Matrix z = pass.layer_inputs.back() * layer.weights.transpose();
    z.rowwise() += layer.bias.transpose();
    if (l + 1 < spec.num_layers()) {
      Matrix a = z.unaryExpr([slope](double x) { return LeakyRelu(x, slope); });
      if (!pass.masks.empty()) a = a.cwiseProduct(pass.masks[l]);
      pass.layer_inputs.push_back(std::move(a));
    }
    pass.pre_activations.push_back(std::move(z));
  }
  pass.probabilities = pass.pre_activations.back().col(0).unaryExpr(&Sigmoid);
  return pass;
}

ForwardPass Forward(const NetworkSpec& spec, const ParameterSet& params, const Matrix& batch,
                    Mode mode, Rng* rng) {
  CheckBatch(spec, batch);
  DropoutMasks masks;
  if (mode == Mode::kTrain && spec.dropout_rate() > 0.0) {
    if (rng == nullptr) throw ArgumentError("train-mode forward with dropout needs an rng");
    masks = DrawDropoutMasks(spec, static_cast<std::size_t>(batch.rows()), *rng);
  }
  return ForwardWithMasks(spec, params, batch, std::move(masks));
}

ClassFrequencies ClassFrequencies::FromLabels(std::span<const int> labels) {
  ClassFrequencies freqs;
  if (labels.empty()) return freqs;
  for (int y : labels) {
    if (y < 0 || y >= kNumClasses) throw ArgumentError(fmt::format("label {} is not binary", y));
    freqs.values[static_cast<std::size_t>(y)] += 1.0;
  }
  for (auto& f : freqs.values) f /= static_cast<double>(labels.size());
  return freqs;
}

LossWithLogitGradient WeightedCrossEntropyWithGradient(const Vector& probs,
                                                       std::span<const int> labels,
                                                       const ClassFrequencies& freqs,
                                                       int num_classes) {
  const auto n = labels.size();
  if (n == 0) throw ArgumentError("weighted cross-entropy of an empty batch");
  if (static_cast<std::size_t>(probs.size()) != n) {
    throw ShapeError(fmt::format("{} probabilities for {} labels", probs.size(), n));
  }
  const double norm = 1.0 / (static_cast<double>(num_classes) * static_cast<double>(n));
  LossWithLogitGradient out{0.0, Vector::Zero(static_cast<Eigen::Index>(n))};
  for (std::size_t i = 0; i < n; ++i) {
    const int y = labels[i];
    if (y < 0 || y >= kNumClasses) throw ArgumentError(fmt::format("label {} is not binary", y));
    const double freq = freqs[y];
    if (!(freq > 0.0)) {
      throw ArgumentError(fmt::format("sample {} has class {} with batch frequency 0", i, y));
    }
    const double p = probs[static_cast<Eigen::Index>(i)];
    const double p_true = y == 1 ? p : 1.0 - p;
    const double clamped = std::clamp(p_true, kProbabilityClamp, 1.0 - kProbabilityClamp);
    out.loss -= norm * std::log(clamped) / freq;
    // d(-log sigmoid-prob)/dz = p - y, inactive once the clamp engages.
    if (p_true == clamped) {
      out.logit_gradient[static_cast<Eigen::Index>(i)] = norm * (p - y) / freq;
    }
  }
  return out;
}

double WeightedCrossEntropy(const Vector& probs, std::span<const int> labels,
                            const ClassFrequencies& freqs, int num_classes) {
  return WeightedCrossEntropyWithGradient(probs, labels, freqs, num_classes).loss;
}

LossAndGradient BackwardWithMasks(const NetworkSpec& spec, const ParameterSet& params,
                                  const Matrix& batch, std::span<const int> labels,
                                  const ClassFrequencies& freqs, const DropoutMasks& masks) {
  const ForwardPass pass = ForwardWithMasks(spec, params, batch, masks);
  auto data = WeightedCrossEntropyWithGradient(pass.probabilities, labels, freqs);

  LossAndGradient out{data.loss, GradientSet::Zeros(spec)};
  const double slope = spec.leaky_slope();
  Matrix delta = data.logit_gradient;  // n x 1
  for (std::size_t l = spec.num_layers(); l-- > 0;) {
    auto& grad = out.gradient.layers[l];
    grad.weights.noalias() = delta.transpose() * pass.layer_inputs[l];
    grad.bias = delta.colwise().sum().transpose();
    if (l == 0) break;
    Matrix upstream = delta * params.layers[l].weights;
    if (!pass.masks.empty()) upstream = upstream.cwiseProduct(pass.masks[l - 1]);
    const Matrix& z = pass.pre_activations[l - 1];
    delta = upstream.binaryExpr(z, [slope](double g, double x) { return x >= 0.0 ? g : slope * g; });
  }

  const double l2 = spec.l2_coefficient();
  if (l2 > 0.0) {
    for (std::size_t l = 0; l < spec.num_layers(); ++l) {
      const auto& w = params.layers[l].weights;
      out.loss += l2 * w.squaredNorm();
      out.gradient.layers[l].weights += 2.0 * l2 * w;
    }
  }
  return out;
}

LossAndGradient Backward(const NetworkSpec& spec, const ParameterSet& params, const Matrix& batch,
                         std::span<const int> labels, const ClassFrequencies& freqs, Mode mode,
                         Rng* rng) {
  CheckBatch(spec, batch);
  DropoutMasks masks;
  if (mode == Mode::kTrain && spec.dropout_rate() > 0.0) {
    if (rng == nullptr) throw ArgumentError("train-mode backward with dropout needs an rng");
    masks = DrawDropoutMasks(spec, static_cast<std::size_t>(batch.rows()), *rng);
  }
  return BackwardWithMasks(spec, params, batch, labels, freqs, masks);
}

}  // namespace bdlbench
