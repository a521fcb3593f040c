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

// Dense feed-forward binary classifier: leaky-ReLU hidden layers, inverted
// dropout on hidden activations, sigmoid output, class-reweighted
// cross-entropy and exact reverse-mode gradients.

#ifndef BDLBENCH_NETWORK_HPP_
#define BDLBENCH_NETWORK_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bdlbench/random.hpp"

namespace bdlbench {

// Row-major so that a weight matrix's data() is already in the flat
// layer-major, row-major order used by optimizers and checkpoints.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline constexpr double kProbabilityClamp = 1e-7;
inline constexpr int kNumClasses = 2;

class NetworkSpec {
 public:
  // Throws ArgumentError unless: at least two sizes, all positive, last == 1,
  // slope in (0,1), dropout in [0,1), l2 >= 0.
  explicit NetworkSpec(std::vector<std::size_t> layer_sizes, double leaky_slope = 0.2,
                       double dropout_rate = 0.0, double l2_coefficient = 0.0);

  const std::vector<std::size_t>& layer_sizes() const { return layer_sizes_; }
  double leaky_slope() const { return leaky_slope_; }
  double dropout_rate() const { return dropout_rate_; }
  double l2_coefficient() const { return l2_coefficient_; }

  std::size_t num_layers() const { return layer_sizes_.size() - 1; }
  std::size_t input_dim() const { return layer_sizes_.front(); }
  std::size_t fan_in(std::size_t layer) const { return layer_sizes_[layer]; }
  std::size_t fan_out(std::size_t layer) const { return layer_sizes_[layer + 1]; }
  // Weights plus biases.
  std::size_t parameter_count() const;
  std::size_t weight_count() const;

  NetworkSpec WithDropout(double rate) const;

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;

 private:
  std::vector<std::size_t> layer_sizes_;
  double leaky_slope_;
  double dropout_rate_;
  double l2_coefficient_;
};

struct DenseParams {
  Matrix weights;  // fan_out x fan_in
  Vector bias;     // fan_out
};

// Per-layer weights and biases. The tag keeps parameters and gradients from
// being mixed up while sharing one layout.
template <typename Tag>
struct LayeredParams {
  std::vector<DenseParams> layers;

  // Zero-valued, shaped for `spec`.
  static LayeredParams Zeros(const NetworkSpec& spec) {
    LayeredParams out;
    for (std::size_t l = 0; l < spec.num_layers(); ++l) {
      out.layers.push_back({Matrix::Zero(spec.fan_out(l), spec.fan_in(l)),
                            Vector::Zero(spec.fan_out(l))});
    }
    return out;
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& layer : layers) n += layer.weights.size() + layer.bias.size();
    return n;
  }

  // Layer-major; within a layer, weights row-major then bias.
  std::vector<double> Flatten() const {
    std::vector<double> flat;
    flat.reserve(size());
    for (const auto& layer : layers) {
      flat.insert(flat.end(), layer.weights.data(), layer.weights.data() + layer.weights.size());
      flat.insert(flat.end(), layer.bias.data(), layer.bias.data() + layer.bias.size());
    }
    return flat;
  }

  // Inverse of Flatten; `flat.size()` must equal size().
  void Assign(std::span<const double> flat) {
    std::size_t pos = 0;
    for (auto& layer : layers) {
      std::copy_n(flat.begin() + pos, layer.weights.size(), layer.weights.data());
      pos += layer.weights.size();
      std::copy_n(flat.begin() + pos, layer.bias.size(), layer.bias.data());
      pos += layer.bias.size();
    }
  }

  bool AllFinite() const {
    for (const auto& layer : layers) {
      if (!layer.weights.allFinite() || !layer.bias.allFinite()) return false;
    }
    return true;
  }

  // Exact equality, NaN-unaware.
  friend bool operator==(const LayeredParams& a, const LayeredParams& b) {
    if (a.layers.size() != b.layers.size()) return false;
    for (std::size_t l = 0; l < a.layers.size(); ++l) {
      const auto& x = a.layers[l];
      const auto& y = b.layers[l];
      if (x.weights.rows() != y.weights.rows() || x.weights.cols() != y.weights.cols() ||
          x.bias.size() != y.bias.size() || x.weights != y.weights || x.bias != y.bias) {
        return false;
      }
    }
    return true;
  }
};

using ParameterSet = LayeredParams<struct ParameterTag>;
using GradientSet = LayeredParams<struct GradientTag>;

// Throws ShapeError naming the first inconsistent layer.
void CheckShapes(const NetworkSpec& spec, const std::vector<DenseParams>& layers);

// Weights ~ U[-b, b], b = sqrt(6 / (fan_in + fan_out)); biases zero.
ParameterSet GlorotUniformInit(const NetworkSpec& spec, Rng& rng);
double GlorotBound(std::size_t fan_in, std::size_t fan_out);

enum class Mode { kTrain, kEval };

// One mask per hidden layer, entries 0 or 1/(1-p). Empty means no dropout.
using DropoutMasks = std::vector<Matrix>;

DropoutMasks DrawDropoutMasks(const NetworkSpec& spec, std::size_t batch_rows, Rng& rng);

struct ForwardPass {
  std::vector<Matrix> layer_inputs;     // layer_inputs[0] is the batch
  std::vector<Matrix> pre_activations;  // one per layer
  DropoutMasks masks;
  Vector probabilities;                 // sigmoid of the final pre-activation
};

// kTrain requires `rng` when dropout_rate > 0. Throws ShapeError on a batch
// width mismatch.
ForwardPass Forward(const NetworkSpec& spec, const ParameterSet& params, const Matrix& batch,
                    Mode mode, Rng* rng = nullptr);
// Train-mode forward with caller-provided masks.
ForwardPass ForwardWithMasks(const NetworkSpec& spec, const ParameterSet& params,
                             const Matrix& batch, DropoutMasks masks);

double Sigmoid(double z);
double LeakyRelu(double x, double slope);

// Empirical class fractions of a mini-batch.
struct ClassFrequencies {
  std::array<double, kNumClasses> values{};

  static ClassFrequencies FromLabels(std::span<const int> labels);
  double operator[](int k) const { return values[static_cast<std::size_t>(k)]; }
};

// -(1/(K n)) sum_i log p_i(y_i) / freq(y_i), probabilities clamped to
// [kProbabilityClamp, 1 - kProbabilityClamp]. Throws ArgumentError on an
// empty batch, length mismatch, or a label whose class frequency is zero.
double WeightedCrossEntropy(const Vector& probs, std::span<const int> labels,
                            const ClassFrequencies& freqs, int num_classes = kNumClasses);

struct LossWithLogitGradient {
  double loss;
  Vector logit_gradient;  // dLoss/dz for each sample; zero where clamped
};
LossWithLogitGradient WeightedCrossEntropyWithGradient(const Vector& probs,
                                                       std::span<const int> labels,
                                                       const ClassFrequencies& freqs,
                                                       int num_classes = kNumClasses);

struct LossAndGradient {
  double loss;  // weighted cross-entropy + l2 * sum(W^2)
  GradientSet gradient;
};

LossAndGradient Backward(const NetworkSpec& spec, const ParameterSet& params, const Matrix& batch,
                         std::span<const int> labels, const ClassFrequencies& freqs, Mode mode,
                         Rng* rng = nullptr);
// Backward through a fixed set of masks (empty masks = eval mode).
LossAndGradient BackwardWithMasks(const NetworkSpec& spec, const ParameterSet& params,
                                  const Matrix& batch, std::span<const int> labels,
                                  const ClassFrequencies& freqs, const DropoutMasks& masks);

}  // namespace bdlbench

#endif  // BDLBENCH_NETWORK_HPP_
