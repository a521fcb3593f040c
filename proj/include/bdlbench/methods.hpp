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

#ifndef BDLBENCH_METHODS_HPP_
#define BDLBENCH_METHODS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bdlbench/adam.hpp"
#include "bdlbench/data.hpp"
#include "bdlbench/metrics.hpp"
#include "bdlbench/network.hpp"
#include "bdlbench/variational.hpp"

namespace bdlbench {

enum class MethodTag {
  kDeterministic,
  kMcDropout,
  kMfvi,
  kDeepEnsemble,
  kEnsembleMcDropout,
  kRandom,
};

std::string_view ToString(MethodTag tag);
MethodTag ParseMethodTag(std::string_view text);  // throws ArgumentError
std::vector<MethodTag> AllMethods();

struct TrainConfig {
  AdamConfig adam;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 100;
  // Epochs without validation-loss improvement before stopping; 0 disables
  // early stopping. Requires a validation set.
  std::size_t patience = 0;
};

struct MfviConfig {
  double prior_sigma = 1.0;
  double init_sigma_factor = 0.01;
  Estimator estimator = Estimator::kFlipout;
  KlMode kl_mode = KlMode::kClosedForm;
  // Halve hidden widths to offset the doubled per-weight parameter count.
  bool match_parameter_budget = true;
};

struct TrainingRecord {
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  double final_loss = 0.0;  // mean mini-batch objective of the last epoch

  friend bool operator==(const TrainingRecord&, const TrainingRecord&) = default;
};

// A trained model of any method. Immutable after training; sampling only
// needs a caller-owned Rng.
struct UncertaintyModel {
  MethodTag method = MethodTag::kDeterministic;
  NetworkSpec spec{{1, 1}};
  std::vector<ParameterSet> members;  // empty for mfvi
  std::vector<TrainingRecord> records;  // one per member (one for mfvi)
  std::optional<VariationalParams> variational;

  std::size_t trainable_parameter_count() const;
};

// Hidden widths halved (integer division), at least 1.
NetworkSpec ReducedWidthSpec(const NetworkSpec& spec);

// Training with dropout (if the spec has it) and L2; predictions in eval mode.
// Throws TrainingError for a single-class training set.
UncertaintyModel TrainDeterministic(const NetworkSpec& spec, const Dataset& train,
                                    const TrainConfig& config, std::uint64_t seed,
                                    const Dataset* validation = nullptr);
// Same recipe, tagged for test-time dropout sampling. Requires dropout > 0.
UncertaintyModel TrainMcDropout(const NetworkSpec& spec, const Dataset& train,
                                const TrainConfig& config, std::uint64_t seed,
                                const Dataset* validation = nullptr);
// Deterministic base model whose referral key is replaced by random scores.
UncertaintyModel TrainRandomBaseline(const NetworkSpec& spec, const Dataset& train,
                                     const TrainConfig& config, std::uint64_t seed,
                                     const Dataset* validation = nullptr);
UncertaintyModel TrainMfvi(const NetworkSpec& spec, const Dataset& train,
                           const TrainConfig& config, const MfviConfig& mfvi, std::uint64_t seed,
                           const Dataset* validation = nullptr);
// Members use seeds base_seed + i. Throws ArgumentError for members < 2.
UncertaintyModel TrainDeepEnsemble(const NetworkSpec& spec, const Dataset& train,
                                   const TrainConfig& config, std::size_t members,
                                   std::uint64_t base_seed, const Dataset* validation = nullptr);
// E dropout models with seeds base_seed + i. Requires dropout > 0, E >= 1.
UncertaintyModel TrainEnsembleMcDropout(const NetworkSpec& spec, const Dataset& train,
                                        const TrainConfig& config, std::size_t members,
                                        std::uint64_t base_seed,
                                        const Dataset* validation = nullptr);

// T eval-mode copies of the sigmoid output.
PredictiveSamples SampleDeterministic(const NetworkSpec& spec, const ParameterSet& params,
                                      const Matrix& batch, std::size_t num_samples);
// T passes with fresh dropout masks. Throws ArgumentError for T < 1.
PredictiveSamples SampleMcDropout(const NetworkSpec& spec, const ParameterSet& params,
                                  const Matrix& batch, std::size_t num_samples, Rng& rng);
// T independent weight draws.
PredictiveSamples SampleMfvi(const NetworkSpec& spec, const VariationalParams& params,
                             const Matrix& batch, std::size_t num_samples, Rng& rng);
// One eval-mode row per member.
PredictiveSamples SampleEnsemble(const NetworkSpec& spec, std::span<const ParameterSet> members,
                                 const Matrix& batch);
// S dropout passes per member, rows grouped by member (E * S rows).
PredictiveSamples SampleEnsembleMcDropout(const NetworkSpec& spec,
                                          std::span<const ParameterSet> members,
                                          const Matrix& batch, std::size_t samples_per_member,
                                          Rng& rng);

// i.i.d. uniform referral keys in [0, ln 2), independent of any input.
Vector RandomScores(std::size_t n, Rng& rng);

struct SamplingConfig {
  std::size_t num_samples = 100;         // T
  std::size_t samples_per_member = 33;   // S for ensemble_mc_dropout
};

// Method-dispatching sampler; every method yields entries in (0,1).
PredictiveSamples SamplePredictive(const UncertaintyModel& model, const Matrix& batch,
                                   const SamplingConfig& config, Rng& rng);

// Predictive mean + entropy, except the random baseline whose uncertainty
// comes from RandomScores drawn after sampling.
ScoredPredictions ScoreModel(const UncertaintyModel& model, const Dataset& dataset,
                             const SamplingConfig& config, Rng& rng);

}  // namespace bdlbench

#endif  // BDLBENCH_METHODS_HPP_
