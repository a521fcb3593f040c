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

#include "bdlbench/methods.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "bdlbench/errors.hpp"

namespace bdlbench {

std::string_view ToString(MethodTag tag) {
  switch (tag) {
    case MethodTag::kDeterministic: return "deterministic";
    case MethodTag::kMcDropout: return "mc_dropout";
    case MethodTag::kMfvi: return "mfvi";
    case MethodTag::kDeepEnsemble: return "deep_ensemble";
    case MethodTag::kEnsembleMcDropout: return "ensemble_mc_dropout";
    case MethodTag::kRandom: return "random";
  }
  return "?";
}

std::vector<MethodTag> AllMethods() {
  return {MethodTag::kMcDropout,    MethodTag::kMfvi,
          MethodTag::kDeepEnsemble, MethodTag::kDeterministic,
          MethodTag::kEnsembleMcDropout, MethodTag::kRandom};
}

MethodTag ParseMethodTag(std::string_view text) {
  for (auto tag : AllMethods()) {
    if (text == ToString(tag)) return tag;
  }
  throw ArgumentError(fmt::format("unknown method '{}'", text));
}

std::size_t UncertaintyModel::trainable_parameter_count() const {
  if (variational) return variational->trainable_count();
  std::size_t n = 0;
  for (const auto& m : members) n += m.size();
  return n;
}

NetworkSpec ReducedWidthSpec(const NetworkSpec& spec) {
  auto sizes = spec.layer_sizes();
  for (std::size_t i = 1; i + 1 < sizes.size(); ++i) {
    sizes[i] = std::max<std::size_t>(1, sizes[i] / 2);
  }
  return NetworkSpec(std::move(sizes), spec.leaky_slope(), spec.dropout_rate(),
                     spec.l2_coefficient());
}

namespace {

void RequireTrainable(const NetworkSpec& spec, const Dataset& train, const TrainConfig& config,
                      const Dataset* validation) {
  train.Validate();
  if (train.dim() != spec.input_dim()) {
    throw ShapeError(fmt::format("training data has {} features, network expects {}", train.dim(),
                                 spec.input_dim()));
  }
  if (!train.has_both_classes()) {
    throw TrainingError("training set must contain both classes");
  }
  if (config.max_epochs == 0) throw ArgumentError("max_epochs must be positive");
  if (config.patience > 0 && validation == nullptr) {
    throw ArgumentError("early stopping needs a validation set");
  }
  if (validation != nullptr && !validation->has_both_classes()) {
    throw TrainingError("validation set must contain both classes");
  }
}

// Tracks validation loss and remembers the best snapshot.
template <typename Snapshot>
class EarlyStopper {
 public:
  explicit EarlyStopper(std::size_t patience) : patience_(patience) {}

  // Returns true when training should stop.
  bool Observe(double val_loss, const Snapshot& current) {
    if (patience_ == 0) return false;
    if (!best_ || val_loss < best_loss_) {
      best_loss_ = val_loss;
      best_ = current;
      stale_ = 0;
      return false;
    }
    return ++stale_ >= patience_;
  }

  void Restore(Snapshot& target) const {
    if (best_) target = *best_;
  }

 private:
  std::size_t patience_;
  std::size_t stale_ = 0;
  double best_loss_ = 0.0;
  std::optional<Snapshot> best_;
};

double EvalLoss(const NetworkSpec& spec, const ParameterSet& params, const Dataset& data) {
  const auto pass = Forward(spec, params, data.features, Mode::kEval);
  return WeightedCrossEntropy(pass.probabilities, data.labels,
                              ClassFrequencies::FromLabels(data.labels));
}

struct TrainedNetwork {
  ParameterSet params;
  TrainingRecord record;
};

TrainedNetwork TrainNetwork(const NetworkSpec& spec, const Dataset& train,
                            const TrainConfig& config, std::uint64_t seed,
                            const Dataset* validation) {
  RequireTrainable(spec, train, config, validation);
  Rng init_rng = MakeRng(seed, "init");
  Rng dropout_rng = MakeRng(seed, "dropout");
  TrainedNetwork out{GlorotUniformInit(spec, init_rng), {seed, 0, 0.0}};
  MinibatchIterator batches(train, config.batch_size, seed);
  AdamState adam(out.params.size(), config.adam);
  EarlyStopper<ParameterSet> stopper(config.patience);

  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    double loss_sum = 0.0;
    const auto epoch_batches = batches.NextEpoch();
    for (const auto& b : epoch_batches) {
      auto step = Backward(spec, out.params, b.features, b.labels, b.frequencies, Mode::kTrain,
                           &dropout_rng);
      if (!std::isfinite(step.loss)) {
        throw TrainingError(fmt::format("non-finite loss in epoch {}", epoch));
      }
      AdamStep(adam, out.params, step.gradient);
      loss_sum += step.loss;
    }
    out.record.epochs = epoch + 1;
    out.record.final_loss = loss_sum / static_cast<double>(epoch_batches.size());
    if (validation != nullptr &&
        stopper.Observe(EvalLoss(spec, out.params, *validation), out.params)) {
      break;
    }
  }
  stopper.Restore(out.params);
  return out;
}

UncertaintyModel SingleNetworkModel(MethodTag tag, const NetworkSpec& spec, TrainedNetwork net) {
  UncertaintyModel model;
  model.method = tag;
  model.spec = spec;
  model.members.push_back(std::move(net.params));
  model.records.push_back(net.record);
  return model;
}

UncertaintyModel EnsembleModel(MethodTag tag, const NetworkSpec& spec, const Dataset& train,
                               const TrainConfig& config, std::size_t members,
                               std::uint64_t base_seed, const Dataset* validation) {
  UncertaintyModel model;
  model.method = tag;
  model.spec = spec;
  for (std::size_t i = 0; i < members; ++i) {
    auto net = TrainNetwork(spec, train, config, base_seed + i, validation);
    model.members.push_back(std::move(net.params));
    model.records.push_back(net.record);
  }
  return model;
}

void ClampOpenUnit(Matrix& probs) {
  constexpr double kLow = std::numeric_limits<double>::min();
  const double high = std::nextafter(1.0, 0.0);
  probs = probs.cwiseMax(kLow).cwiseMin(high);
}

void RequireSamples(std::size_t num_samples) {
  if (num_samples < 1) throw ArgumentError("number of predictive samples must be >= 1");
}

}  // namespace

UncertaintyModel TrainDeterministic(const NetworkSpec& spec, const Dataset& train,
                                    const TrainConfig& config, std::uint64_t seed,
                                    const Dataset* validation) {
  return SingleNetworkModel(MethodTag::kDeterministic, spec,
                            TrainNetwork(spec, train, config, seed, validation));
}

UncertaintyModel TrainMcDropout(const NetworkSpec& spec, const Dataset& train,
                                const TrainConfig& config, std::uint64_t seed,
                                const Dataset* validation) {
  if (!(spec.dropout_rate() > 0.0)) throw ArgumentError("MC dropout needs dropout_rate > 0");
  return SingleNetworkModel(MethodTag::kMcDropout, spec,
                            TrainNetwork(spec, train, config, seed, validation));
}

UncertaintyModel TrainRandomBaseline(const NetworkSpec& spec, const Dataset& train,
                                     const TrainConfig& config, std::uint64_t seed,
                                     const Dataset* validation) {
  return SingleNetworkModel(MethodTag::kRandom, spec,
                            TrainNetwork(spec, train, config, seed, validation));
}

UncertaintyModel TrainDeepEnsemble(const NetworkSpec& spec, const Dataset& train,
                                   const TrainConfig& config, std::size_t members,
                                   std::uint64_t base_seed, const Dataset* validation) {
  if (members < 2) throw ArgumentError("a deep ensemble needs at least 2 members");
  return EnsembleModel(MethodTag::kDeepEnsemble, spec, train, config, members, base_seed,
                       validation);
}

UncertaintyModel TrainEnsembleMcDropout(const NetworkSpec& spec, const Dataset& train,
                                        const TrainConfig& config, std::size_t members,
                                        std::uint64_t base_seed, const Dataset* validation) {
  if (members < 1) throw ArgumentError("an ensemble needs at least 1 member");
  if (!(spec.dropout_rate() > 0.0)) throw ArgumentError("MC dropout needs dropout_rate > 0");
  return EnsembleModel(MethodTag::kEnsembleMcDropout, spec, train, config, members, base_seed,
                       validation);
}

UncertaintyModel TrainMfvi(const NetworkSpec& spec, const Dataset& train,
                           const TrainConfig& config, const MfviConfig& mfvi, std::uint64_t seed,
                           const Dataset* validation) {
  const NetworkSpec base = mfvi.match_parameter_budget ? ReducedWidthSpec(spec) : spec;
  // The KL term replaces dropout and L2.
  const NetworkSpec model_spec(base.layer_sizes(), base.leaky_slope(), 0.0, 0.0);
  RequireTrainable(model_spec, train, config, validation);

  Rng init_rng = MakeRng(seed, "init");
  Rng noise_rng = MakeRng(seed, "weight_noise");
  auto params = VariationalParams::Init(model_spec, init_rng, mfvi.prior_sigma,
                                        mfvi.init_sigma_factor);
  MinibatchIterator batches(train, config.batch_size, seed);
  AdamState adam(params.trainable_count(), config.adam);
  EarlyStopper<VariationalParams> stopper(config.patience);
  TrainingRecord record{seed, 0, 0.0};

  std::vector<double> flat = params.Flatten();
  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    double loss_sum = 0.0;
    const auto epoch_batches = batches.NextEpoch();
    for (const auto& b : epoch_batches) {
      const auto terms = ElboMinibatch(params, model_spec, b.features, b.labels, train.size(),
                                       noise_rng, mfvi.estimator, mfvi.kl_mode);
      if (!std::isfinite(terms.negative_elbo)) {
        throw TrainingError(fmt::format("non-finite negative ELBO in epoch {}", epoch));
      }
      const auto grad = terms.gradient.Flatten();
      AdamStep(adam, flat, grad);
      params.Assign(flat);
      loss_sum += terms.negative_elbo / static_cast<double>(b.labels.size());
    }
    record.epochs = epoch + 1;
    record.final_loss = loss_sum / static_cast<double>(epoch_batches.size());
    if (validation != nullptr &&
        stopper.Observe(EvalLoss(model_spec, params.Mean(), *validation), params)) {
      break;
    }
  }
  stopper.Restore(params);

  UncertaintyModel model;
  model.method = MethodTag::kMfvi;
  model.spec = model_spec;
  model.variational = std::move(params);
  model.records.push_back(record);
  return model;
}

PredictiveSamples SampleDeterministic(const NetworkSpec& spec, const ParameterSet& params,
                                      const Matrix& batch, std::size_t num_samples) {
  RequireSamples(num_samples);
  const auto pass = Forward(spec, params, batch, Mode::kEval);
  PredictiveSamples out;
  out.method = std::string(ToString(MethodTag::kDeterministic));
  out.probabilities = pass.probabilities.transpose().replicate(static_cast<Eigen::Index>(num_samples), 1);
  ClampOpenUnit(out.probabilities);
  return out;
}

PredictiveSamples SampleMcDropout(const NetworkSpec& spec, const ParameterSet& params,
                                  const Matrix& batch, std::size_t num_samples, Rng& rng) {
  RequireSamples(num_samples);
  PredictiveSamples out;
  out.method = std::string(ToString(MethodTag::kMcDropout));
  out.probabilities.resize(static_cast<Eigen::Index>(num_samples), batch.rows());
  for (std::size_t t = 0; t < num_samples; ++t) {
    const auto pass = Forward(spec, params, batch, Mode::kTrain, &rng);
    out.probabilities.row(static_cast<Eigen::Index>(t)) = pass.probabilities.transpose();
  }
  ClampOpenUnit(out.probabilities);
  return out;
}

PredictiveSamples SampleMfvi(const NetworkSpec& spec, const VariationalParams& params,
                             const Matrix& batch, std::size_t num_samples, Rng& rng) {
  RequireSamples(num_samples);
  CheckShapes(spec, params);
  PredictiveSamples out;
  out.method = std::string(ToString(MethodTag::kMfvi));
  out.probabilities.resize(static_cast<Eigen::Index>(num_samples), batch.rows());
  for (std::size_t t = 0; t < num_samples; ++t) {
    const auto pass = Forward(spec, params.Sample(rng), batch, Mode::kEval);
    out.probabilities.row(static_cast<Eigen::Index>(t)) = pass.probabilities.transpose();
  }
  ClampOpenUnit(out.probabilities);
  return out;
}

PredictiveSamples SampleEnsemble(const NetworkSpec& spec, std::span<const ParameterSet> members,
                                 const Matrix& batch) {
  if (members.empty()) throw ArgumentError("ensemble has no members");
  PredictiveSamples out;
  out.method = std::string(ToString(MethodTag::kDeepEnsemble));
  out.probabilities.resize(static_cast<Eigen::Index>(members.size()), batch.rows());
  for (std::size_t m = 0; m < members.size(); ++m) {
    const auto pass = Forward(spec, members[m], batch, Mode::kEval);
    out.probabilities.row(static_cast<Eigen::Index>(m)) = pass.probabilities.transpose();
  }
  ClampOpenUnit(out.probabilities);
  return out;
}

PredictiveSamples SampleEnsembleMcDropout(const NetworkSpec& spec,
                                          std::span<const ParameterSet> members,
                                          const Matrix& batch, std::size_t samples_per_member,
                                          Rng& rng) {
  if (members.empty()) throw ArgumentError("ensemble has no members");
  RequireSamples(samples_per_member);
  PredictiveSamples out;
  out.method = std::string(ToString(MethodTag::kEnsembleMcDropout));
  out.probabilities.resize(static_cast<Eigen::Index>(members.size() * samples_per_member),
                           batch.rows());
  Eigen::Index row = 0;
  for (const auto& member : members) {
    const auto block = SampleMcDropout(spec, member, batch, samples_per_member, rng);
    out.probabilities.middleRows(row, block.probabilities.rows()) = block.probabilities;
    row += block.probabilities.rows();
  }
  return out;
}

Vector RandomScores(std::size_t n, Rng& rng) {
  const double ln2 = std::log(2.0);
  Vector scores(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < scores.size(); ++i) scores[i] = ln2 * UniformUnit(rng);
  return scores;
}

PredictiveSamples SamplePredictive(const UncertaintyModel& model, const Matrix& batch,
                                   const SamplingConfig& config, Rng& rng) {
  PredictiveSamples out;
  switch (model.method) {
    case MethodTag::kDeterministic:
    case MethodTag::kRandom:
      out = SampleDeterministic(model.spec, model.members.at(0), batch, config.num_samples);
      break;
    case MethodTag::kMcDropout:
      out = SampleMcDropout(model.spec, model.members.at(0), batch, config.num_samples, rng);
      break;
    case MethodTag::kMfvi:
      if (!model.variational) throw StateError("mfvi model has no variational parameters");
      out = SampleMfvi(model.spec, *model.variational, batch, config.num_samples, rng);
      break;
    case MethodTag::kDeepEnsemble:
      out = SampleEnsemble(model.spec, model.members, batch);
      break;
    case MethodTag::kEnsembleMcDropout:
      out = SampleEnsembleMcDropout(model.spec, model.members, batch, config.samples_per_member,
                                    rng);
      break;
  }
  out.method = std::string(ToString(model.method));
  return out;
}

ScoredPredictions ScoreModel(const UncertaintyModel& model, const Dataset& dataset,
                             const SamplingConfig& config, Rng& rng) {
  const auto samples = SamplePredictive(model, dataset.features, config, rng);
  auto scored = ScoreByEntropy(samples, dataset.labels);
  if (model.method == MethodTag::kRandom) scored.uncertainty = RandomScores(dataset.size(), rng);
  return scored;
}

}  // namespace bdlbench
