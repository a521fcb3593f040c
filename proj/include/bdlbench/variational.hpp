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

// Mean-field Gaussian posterior over dense-network weights: closed-form KL,
// flipout perturbations, and the mini-batch negative ELBO with
// reparameterization gradients.

#ifndef BDLBENCH_VARIATIONAL_HPP_
#define BDLBENCH_VARIATIONAL_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "bdlbench/network.hpp"
#include "bdlbench/random.hpp"

namespace bdlbench {

double Softplus(double x);
double SoftplusInverse(double y);  // y > 0

// sigma = softplus(rho) for both weights and biases.
struct VariationalLayer {
  Matrix weight_mean;
  Matrix weight_rho;
  Vector bias_mean;
  Vector bias_rho;
};

struct VariationalParams {
  std::vector<VariationalLayer> layers;
  double prior_sigma = 1.0;

  // mu from Glorot-uniform, biases zero; every rho gives
  // sigma = init_sigma_factor * glorot bound of its layer.
  static VariationalParams Init(const NetworkSpec& spec, Rng& rng, double prior_sigma = 1.0,
                                double init_sigma_factor = 0.01);
  static VariationalParams ZerosLike(const VariationalParams& other);

  // Means and scales of every weight and bias: twice the deterministic count.
  std::size_t trainable_count() const;
  // Per layer: weight_mean, weight_rho (row-major), bias_mean, bias_rho.
  std::vector<double> Flatten() const;
  void Assign(std::span<const double> flat);

  ParameterSet Mean() const;
  ParameterSet Sample(Rng& rng) const;  // one naive weight draw

  friend bool operator==(const VariationalParams&, const VariationalParams&);
};

// Shapes must match `spec`; throws ShapeError naming the layer.
void CheckShapes(const NetworkSpec& spec, const VariationalParams& params);

// sum 0.5 * (s^2/sp^2 + m^2/sp^2 - 1 - ln(s^2/sp^2)). Throws ArgumentError
// for non-positive scales or mismatched lengths.
double KlFactorizedGaussian(std::span<const double> mean, std::span<const double> sigma,
                            double prior_sigma);
double KlFactorizedGaussian(const VariationalParams& params);

struct KlWithGradient {
  double kl;
  VariationalParams gradient;  // w.r.t. means and rhos; prior_sigma unused
};
KlWithGradient KlClosedFormWithGradient(const VariationalParams& params);

// Per-example output perturbation ((x_n o s_n) dW^T) o r_n with sign
// matrices S (n x in) and R (n x out). Throws ShapeError on mismatch.
Matrix FlipoutPerturb(const Matrix& inputs, const Matrix& delta_weights, const Matrix& input_signs,
                      const Matrix& output_signs);
// Draws fresh +-1 signs from `rng`.
Matrix FlipoutPerturb(const Matrix& inputs, const Matrix& delta_weights, Rng& rng);
Matrix RandomSigns(Eigen::Index rows, Eigen::Index cols, Rng& rng);

enum class Estimator { kNaive, kFlipout };
enum class KlMode { kClosedForm, kSampled };

struct ElboTerms {
  double negative_elbo;    // likelihood_term + kl_term
  double likelihood_term;  // batch_size * class-reweighted cross-entropy
  double kl_term;          // (batch_size / n_total) * KL
  VariationalParams gradient;
};

// One weight-noise draw per batch. kNaive applies it to every example;
// kFlipout decorrelates it per example with random sign flips (biases are
// flipped on the output side). The likelihood term is the reweighted
// cross-entropy scaled to a per-batch sum so that summing over an epoch
// recovers the full-data ELBO.
ElboTerms ElboMinibatch(const VariationalParams& params, const NetworkSpec& spec,
                        const Matrix& batch, std::span<const int> labels, std::size_t n_total,
                        Rng& rng, Estimator estimator, KlMode kl_mode = KlMode::kClosedForm);

}  // namespace bdlbench

#endif  // BDLBENCH_VARIATIONAL_HPP_
