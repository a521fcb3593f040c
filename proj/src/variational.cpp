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

#include "bdlbench/variational.hpp"

#include <cmath>

#include <fmt/format.h>

#include "bdlbench/errors.hpp"

namespace bdlbench {

double Softplus(double x) {
  // log(1 + e^x) without overflow.
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double SoftplusInverse(double y) {
  if (!(y > 0.0)) throw ArgumentError(fmt::format("softplus inverse of non-positive {}", y));
  return y > 30.0 ? y + std::log(-std::expm1(-y)) : std::log(std::expm1(y));
}

namespace {

Matrix SoftplusOf(const Matrix& rho) { return rho.unaryExpr(&Softplus); }
Vector SoftplusOf(const Vector& rho) { return rho.unaryExpr(&Softplus); }

// d softplus / d rho.
Matrix LogisticOf(const Matrix& rho) { return rho.unaryExpr(&Sigmoid); }
Vector LogisticOf(const Vector& rho) { return rho.unaryExpr(&Sigmoid); }

template <typename M>
M GaussianLike(const M& shape, Rng& rng) {
  M out(shape.rows(), shape.cols());
  for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = StandardNormal(rng);
  return out;
}

}  // namespace

VariationalParams VariationalParams::Init(const NetworkSpec& spec, Rng& rng, double prior_sigma,
                                          double init_sigma_factor) {
  if (!(prior_sigma > 0.0)) throw ArgumentError("prior sigma must be positive");
  if (!(init_sigma_factor > 0.0)) throw ArgumentError("initial sigma factor must be positive");
  const ParameterSet means = GlorotUniformInit(spec, rng);
  VariationalParams out;
  out.prior_sigma = prior_sigma;
  for (std::size_t l = 0; l < spec.num_layers(); ++l) {
    const double rho = SoftplusInverse(init_sigma_factor * GlorotBound(spec.fan_in(l), spec.fan_out(l)));
    const auto& m = means.layers[l];
    out.layers.push_back({m.weights, Matrix::Constant(m.weights.rows(), m.weights.cols(), rho),
                          m.bias, Vector::Constant(m.bias.size(), rho)});
  }
  return out;
}

VariationalParams VariationalParams::ZerosLike(const VariationalParams& other) {
  VariationalParams out;
  out.prior_sigma = other.prior_sigma;
  for (const auto& l : other.layers) {
    out.layers.push_back({Matrix::Zero(l.weight_mean.rows(), l.weight_mean.cols()),
                          Matrix::Zero(l.weight_rho.rows(), l.weight_rho.cols()),
                          Vector::Zero(l.bias_mean.size()), Vector::Zero(l.bias_rho.size())});
  }
  return out;
}

std::size_t VariationalParams::trainable_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) {
    n += static_cast<std::size_t>(l.weight_mean.size() + l.weight_rho.size() + l.bias_mean.size() +
                                  l.bias_rho.size());
  }
  return n;
}

std::vector<double> VariationalParams::Flatten() const {
  std::vector<double> flat;
  flat.reserve(trainable_count());
  auto append = [&flat](const auto& m) { flat.insert(flat.end(), m.data(), m.data() + m.size()); };
  for (const auto& l : layers) {
    append(l.weight_mean);
    append(l.weight_rho);
    append(l.bias_mean);
    append(l.bias_rho);
  }
  return flat;
}

void VariationalParams::Assign(std::span<const double> flat) {
  if (flat.size() != trainable_count()) {
    throw ShapeError(fmt::format("expected {} values, got {}", trainable_count(), flat.size()));
  }
  std::size_t pos = 0;
  auto take = [&flat, &pos](auto& m) {
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(pos), m.size(), m.data());
    pos += static_cast<std::size_t>(m.size());
  };
  for (auto& l : layers) {
    take(l.weight_mean);
    take(l.weight_rho);
    take(l.bias_mean);
    take(l.bias_rho);
  }
}

ParameterSet VariationalParams::Mean() const {
  ParameterSet out;
  for (const auto& l : layers) out.layers.push_back({l.weight_mean, l.bias_mean});
  return out;
}

ParameterSet VariationalParams::Sample(Rng& rng) const {
  ParameterSet out;
  for (const auto& l : layers) {
    Matrix w = l.weight_mean + SoftplusOf(l.weight_rho).cwiseProduct(GaussianLike(l.weight_mean, rng));
    Vector b = l.bias_mean + SoftplusOf(l.bias_rho).cwiseProduct(GaussianLike(l.bias_mean, rng));
    out.layers.push_back({std::move(w), std::move(b)});
  }
  return out;
}

bool operator==(const VariationalParams& a, const VariationalParams& b) {
  if (a.prior_sigma != b.prior_sigma || a.layers.size() != b.layers.size()) return false;
  for (std::size_t i = 0; i < a.layers.size(); ++i) {
    const auto& x = a.layers[i];
    const auto& y = b.layers[i];
    if (x.weight_mean.rows() != y.weight_mean.rows() || x.weight_mean.cols() != y.weight_mean.cols() ||
        x.bias_mean.size() != y.bias_mean.size()) {
      return false;
    }
    if (x.weight_mean != y.weight_mean || x.weight_rho != y.weight_rho ||
        x.bias_mean != y.bias_mean || x.bias_rho != y.bias_rho) {
      return false;
    }
  }
  return true;
}

void CheckShapes(const NetworkSpec& spec, const VariationalParams& params) {
  if (params.layers.size() != spec.num_layers()) {
    throw ShapeError(fmt::format("expected {} variational layers, got {}", spec.num_layers(),
                                 params.layers.size()));
  }
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& v = params.layers[l];
    const auto out = static_cast<Eigen::Index>(spec.fan_out(l));
    const auto in = static_cast<Eigen::Index>(spec.fan_in(l));
    if (v.weight_mean.rows() != out || v.weight_mean.cols() != in || v.weight_rho.rows() != out ||
        v.weight_rho.cols() != in || v.bias_mean.size() != out || v.bias_rho.size() != out) {
      throw ShapeError(fmt::format("variational layer {} does not match {}x{}", l, out, in));
    }
  }
}

double KlFactorizedGaussian(std::span<const double> mean, std::span<const double> sigma,
                            double prior_sigma) {
  if (mean.size() != sigma.size()) {
    throw ArgumentError(fmt::format("{} means for {} scales", mean.size(), sigma.size()));
  }
  if (!(prior_sigma > 0.0)) throw ArgumentError("prior sigma must be positive");
  const double prior_var = prior_sigma * prior_sigma;
  double kl = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    if (!(sigma[i] > 0.0)) throw ArgumentError(fmt::format("scale {} at index {} is not positive", sigma[i], i));
    const double ratio = sigma[i] * sigma[i] / prior_var;
    kl += 0.5 * (ratio + mean[i] * mean[i] / prior_var - 1.0 - std::log(ratio));
  }
  return kl;
}

KlWithGradient KlClosedFormWithGradient(const VariationalParams& params) {
  const double sp = params.prior_sigma;
  if (!(sp > 0.0)) throw ArgumentError("prior sigma must be positive");
  const double prior_var = sp * sp;
  KlWithGradient out{0.0, VariationalParams::ZerosLike(params)};
  auto accumulate = [&](const auto& mean, const auto& rho, auto& grad_mean, auto& grad_rho) {
    for (Eigen::Index i = 0; i < mean.size(); ++i) {
      const double m = mean.data()[i];
      const double s = Softplus(rho.data()[i]);
      if (!(s > 0.0)) throw ArgumentError("posterior scale underflowed to zero");
      const double ratio = s * s / prior_var;
      out.kl += 0.5 * (ratio + m * m / prior_var - 1.0 - std::log(ratio));
      grad_mean.data()[i] = m / prior_var;
      grad_rho.data()[i] = (s / prior_var - 1.0 / s) * Sigmoid(rho.data()[i]);
    }
  };
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& v = params.layers[l];
    auto& g = out.gradient.layers[l];
    accumulate(v.weight_mean, v.weight_rho, g.weight_mean, g.weight_rho);
    accumulate(v.bias_mean, v.bias_rho, g.bias_mean, g.bias_rho);
  }
  return out;
}

double KlFactorizedGaussian(const VariationalParams& params) {
  return KlClosedFormWithGradient(params).kl;
}

Matrix RandomSigns(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = (rng() >> 63) != 0 ? 1.0 : -1.0;
  return out;
}

Matrix FlipoutPerturb(const Matrix& inputs, const Matrix& delta_weights, const Matrix& input_signs,
                      const Matrix& output_signs) {
  if (inputs.cols() != delta_weights.cols()) {
    throw ShapeError(fmt::format("inputs have {} columns, weight noise expects {}", inputs.cols(),
                                 delta_weights.cols()));
  }
  if (input_signs.rows() != inputs.rows() || input_signs.cols() != inputs.cols() ||
      output_signs.rows() != inputs.rows() || output_signs.cols() != delta_weights.rows()) {
    throw ShapeError("flipout sign matrices do not match the batch");
  }
  Matrix out = inputs.cwiseProduct(input_signs) * delta_weights.transpose();
  return out.cwiseProduct(output_signs);
}

Matrix FlipoutPerturb(const Matrix& inputs, const Matrix& delta_weights, Rng& rng) {
  if (inputs.cols() != delta_weights.cols()) {
    throw ShapeError(fmt::format("inputs have {} columns, weight noise expects {}", inputs.cols(),
                                 delta_weights.cols()));
  }
  const Matrix s = RandomSigns(inputs.rows(), inputs.cols(), rng);
  const Matrix r = RandomSigns(inputs.rows(), delta_weights.rows(), rng);
  return FlipoutPerturb(inputs, delta_weights, s, r);
}

ElboTerms ElboMinibatch(const VariationalParams& params, const NetworkSpec& spec,
                        const Matrix& batch, std::span<const int> labels, std::size_t n_total,
                        Rng& rng, Estimator estimator, KlMode kl_mode) {
  CheckShapes(spec, params);
  if (static_cast<std::size_t>(batch.cols()) != spec.input_dim()) {
    throw ShapeError(fmt::format("layer 0: batch width {} does not match input size {}",
                                 batch.cols(), spec.input_dim()));
  }
  if (n_total == 0 || static_cast<std::size_t>(batch.rows()) > n_total) {
    throw ArgumentError("n_total must be at least the batch size");
  }
  const std::size_t layers = spec.num_layers();
  const Eigen::Index n = batch.rows();
  const bool flipout = estimator == Estimator::kFlipout;
  const double slope = spec.leaky_slope();

  struct LayerNoise {
    Matrix weight_eps;
    Vector bias_eps;
    Matrix weight_delta;
    Vector bias_delta;
    Matrix input_signs;
    Matrix output_signs;
  };
  std::vector<LayerNoise> noise(layers);
  std::vector<Matrix> inputs{batch};
  std::vector<Matrix> pre;
  for (std::size_t l = 0; l < layers; ++l) {
    const auto& v = params.layers[l];
    auto& z = noise[l];
    z.weight_eps = GaussianLike(v.weight_mean, rng);
    z.bias_eps = GaussianLike(v.bias_mean, rng);
    z.weight_delta = SoftplusOf(v.weight_rho).cwiseProduct(z.weight_eps);
    z.bias_delta = SoftplusOf(v.bias_rho).cwiseProduct(z.bias_eps);

    const Matrix& a = inputs.back();
    Matrix out = a * v.weight_mean.transpose();
    out.rowwise() += v.bias_mean.transpose();
    if (flipout) {
      z.input_signs = RandomSigns(n, a.cols(), rng);
      z.output_signs = RandomSigns(n, v.weight_mean.rows(), rng);
      Matrix bias_noise = z.output_signs;
      bias_noise.array().rowwise() *= z.bias_delta.transpose().array();
      out += FlipoutPerturb(a, z.weight_delta, z.input_signs, z.output_signs) + bias_noise;
    } else {
      out += a * z.weight_delta.transpose();
      out.rowwise() += z.bias_delta.transpose();
    }
    if (l + 1 < layers) {
      inputs.push_back(out.unaryExpr([slope](double x) { return LeakyRelu(x, slope); }));
    }
    pre.push_back(std::move(out));
  }
  const Vector probs = pre.back().col(0).unaryExpr(&Sigmoid);
  const auto freqs = ClassFrequencies::FromLabels(labels);
  auto data = WeightedCrossEntropyWithGradient(probs, labels, freqs);
  const double batch_size = static_cast<double>(n);

  ElboTerms out{0.0, batch_size * data.loss, 0.0, VariationalParams::ZerosLike(params)};
  Matrix delta = batch_size * data.logit_gradient;
  for (std::size_t l = layers; l-- > 0;) {
    const auto& v = params.layers[l];
    const auto& z = noise[l];
    auto& g = out.gradient.layers[l];
    const Matrix& a = inputs[l];
    g.weight_mean.noalias() = delta.transpose() * a;
    g.bias_mean = delta.colwise().sum().transpose();
    Matrix grad_delta_w;
    Vector grad_delta_b;
    Matrix delta_flipped;
    if (flipout) {
      delta_flipped = delta.cwiseProduct(z.output_signs);
      grad_delta_w = delta_flipped.transpose() * a.cwiseProduct(z.input_signs);
      grad_delta_b = delta_flipped.colwise().sum().transpose();
    } else {
      grad_delta_w = g.weight_mean;
      grad_delta_b = g.bias_mean;
    }
    g.weight_rho = grad_delta_w.cwiseProduct(z.weight_eps).cwiseProduct(LogisticOf(v.weight_rho));
    g.bias_rho = grad_delta_b.cwiseProduct(z.bias_eps).cwiseProduct(LogisticOf(v.bias_rho));
    if (l == 0) break;
    Matrix upstream = delta * v.weight_mean;
    if (flipout) {
      upstream += (delta_flipped * z.weight_delta).cwiseProduct(z.input_signs);
    } else {
      upstream += delta * z.weight_delta;
    }
    delta = upstream.binaryExpr(pre[l - 1],
                                [slope](double gr, double x) { return x >= 0.0 ? gr : slope * gr; });
  }

  const double kl_scale = batch_size / static_cast<double>(n_total);
  if (kl_mode == KlMode::kClosedForm) {
    const auto kl = KlClosedFormWithGradient(params);
    out.kl_term = kl_scale * kl.kl;
    for (std::size_t l = 0; l < layers; ++l) {
      auto& g = out.gradient.layers[l];
      const auto& k = kl.gradient.layers[l];
      g.weight_mean += kl_scale * k.weight_mean;
      g.weight_rho += kl_scale * k.weight_rho;
      g.bias_mean += kl_scale * k.bias_mean;
      g.bias_rho += kl_scale * k.bias_rho;
    }
  } else {
    // Single-sample log q(w) - log p(w) at the shared weight draw.
    const double sp = params.prior_sigma;
    const double prior_var = sp * sp;
    double kl = 0.0;
    auto accumulate = [&](const auto& mean, const auto& rho, const auto& eps, auto& grad_mean,
                          auto& grad_rho) {
      for (Eigen::Index i = 0; i < mean.size(); ++i) {
        const double e = eps.data()[i];
        const double s = Softplus(rho.data()[i]);
        const double w = mean.data()[i] + s * e;
        kl += -0.5 * e * e - std::log(s) + 0.5 * w * w / prior_var + std::log(sp);
        grad_mean.data()[i] += kl_scale * w / prior_var;
        grad_rho.data()[i] += kl_scale * (-1.0 / s + e * w / prior_var) * Sigmoid(rho.data()[i]);
      }
    };
    for (std::size_t l = 0; l < layers; ++l) {
      const auto& v = params.layers[l];
      auto& g = out.gradient.layers[l];
      accumulate(v.weight_mean, v.weight_rho, noise[l].weight_eps, g.weight_mean, g.weight_rho);
      accumulate(v.bias_mean, v.bias_rho, noise[l].bias_eps, g.bias_mean, g.bias_rho);
    }
    out.kl_term = kl_scale * kl;
  }
  out.negative_elbo = out.likelihood_term + out.kl_term;
  return out;
}

}  // namespace bdlbench
